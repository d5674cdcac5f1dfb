#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <doctest.h>

#include "fairnets/audit.hpp"
#include "fairnets/extract.hpp"
#include "fairnets/ingest.hpp"
#include "fairnets/py/ast.hpp"
#include "fairnets/query.hpp"
#include "fairnets/rdf.hpp"
#include "fairnets/turtle.hpp"
#include "fairnets/vocab.hpp"
#include "support/generators.hpp"
#include "support/query_oracle.hpp"

using namespace fairnets;
using testsupport::Rng;
using testsupport::pick;

// ---------------------------------------------------------------------------

TEST_CASE("turtle round-trip is the identity on random graphs") {
    Rng rng(0x5eed0001);
    for (int i = 0; i < 300; ++i) {
        rdf::KnowledgeGraph g = testsupport::random_graph(rng);
        rdf::KnowledgeGraph back = rdf::parse_turtle(rdf::serialize_turtle(g));
        REQUIRE(back == g);
    }
}

TEST_CASE("repeated serialization is stable") {
    Rng rng(0x5eed0002);
    for (int i = 0; i < 50; ++i) {
        rdf::KnowledgeGraph g = testsupport::random_graph(rng);
        std::string once = rdf::serialize_turtle(g);
        std::string twice = rdf::serialize_turtle(rdf::parse_turtle(once));
        REQUIRE(once == twice);
    }
}

// ---------------------------------------------------------------------------

namespace {

// Exponential-time reference: longest subsequence of `a` that is also a
// subsequence of `b`, by enumerating all subsets of `a`.
std::size_t lcs_bruteforce(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
        std::size_t cursor = 0;
        std::size_t length = 0;
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            while (cursor < b.size() && b[cursor] != a[i]) ++cursor;
            if (cursor == b.size()) {
                ok = false;
            } else {
                ++cursor;
                ++length;
            }
        }
        if (ok) best = std::max(best, length);
    }
    return best;
}

}  // namespace

TEST_CASE("lcs_length equals the brute-force subset oracle") {
    Rng rng(0x5eed0003);
    for (int i = 0; i < 500; ++i) {
        std::vector<std::string> a = testsupport::random_layer_names(rng, 10);
        std::vector<std::string> b = testsupport::random_layer_names(rng, 10);
        REQUIRE(audit::lcs_length(a, b) == lcs_bruteforce(a, b));
    }
}

// ---------------------------------------------------------------------------

namespace {

// Random integer expression tree rendered as subject source; the expected
// value is computed here, independently of the extraction folder.
struct GenExpr {
    std::string text;
    std::int64_t value = 0;
};

GenExpr random_expr(Rng& rng, const std::vector<GenExpr>& bound_names, int depth) {
    // Keep every intermediate value well inside int64 so the subject-side
    // overflow guard never trips and this evaluator never overflows either.
    constexpr std::int64_t kLimit = 1'000'000'000'000'000;
    if (depth == 0 || pick(rng, 3) == 0) {
        if (!bound_names.empty() && pick(rng, 2) == 0) {
            const GenExpr& named = bound_names[pick(rng, bound_names.size())];
            return named;
        }
        std::int64_t k = static_cast<std::int64_t>(pick(rng, 101)) - 50;
        if (k < 0) return {"(" + std::to_string(k) + ")", k};
        return {std::to_string(k), k};
    }
    GenExpr lhs = random_expr(rng, bound_names, depth - 1);
    GenExpr rhs = random_expr(rng, bound_names, depth - 1);
    const char* op = "+";
    __int128 wide = 0;
    switch (pick(rng, 3)) {
        case 0:
            op = "+";
            wide = static_cast<__int128>(lhs.value) + rhs.value;
            break;
        case 1:
            op = "-";
            wide = static_cast<__int128>(lhs.value) - rhs.value;
            break;
        default:
            op = "*";
            wide = static_cast<__int128>(lhs.value) * rhs.value;
            break;
    }
    if (wide > kLimit || wide < -kLimit) return lhs;
    return {"(" + lhs.text + " " + op + " " + rhs.text + ")",
            static_cast<std::int64_t>(wide)};
}

}  // namespace

TEST_CASE("constant folding matches an independent evaluator") {
    Rng rng(0x5eed0004);
    for (int round = 0; round < 200; ++round) {
        std::vector<GenExpr> bindings;
        std::string source;
        std::size_t binding_count = 1 + pick(rng, 5);
        for (std::size_t i = 0; i < binding_count; ++i) {
            GenExpr expr = random_expr(rng, bindings, 3);
            std::string name = "V" + std::to_string(i);
            source += name + " = " + expr.text + "\n";
            bindings.push_back({name, expr.value});
        }
        auto outcome = py::parse_subject_source(source);
        REQUIRE(std::holds_alternative<py::Node>(outcome));
        extract::StaticEnv env =
            extract::build_static_environment(std::get<py::Node>(outcome), source);
        for (const GenExpr& binding : bindings) {
            const extract::LiteralValue* value = env.lookup(binding.text);
            REQUIRE(value != nullptr);
            REQUIRE(value->kind == extract::LiteralValue::Kind::Integer);
            REQUIRE(value->integer == binding.value);
        }
    }
}

// ---------------------------------------------------------------------------

TEST_CASE("query results equal a brute-force scan of the generator records") {
    Rng rng(0x5eed0005);
    const vocab::Vocabulary& vocabulary = vocab::builtin_vocabulary();
    for (int round = 0; round < 100; ++round) {
        testsupport::NetworkCorpus corpus = testsupport::random_network_corpus(rng);
        query::QueryFilter filter = testsupport::random_filter(rng);

        std::vector<testsupport::NetSpec> expected;
        for (const testsupport::NetSpec& spec : corpus.specs) {
            if (testsupport::spec_matches(spec, filter)) expected.push_back(spec);
        }
        std::sort(expected.begin(), expected.end(),
                  [](const auto& a, const auto& b) { return a.iri < b.iri; });

        std::vector<query::ResultRow> rows =
            query::query_graph(corpus.graph, filter, vocabulary);
        REQUIRE(rows.size() == expected.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            REQUIRE(rows[i].iri.value() == expected[i].iri);
            REQUIRE(rows[i].label == expected[i].label);
            REQUIRE(std::string(inference::to_string(rows[i].type)) == expected[i].type);
            REQUIRE(rows[i].created == expected[i].created);
        }
    }
}

// ---------------------------------------------------------------------------

TEST_CASE("merge is idempotent, commutative, and associative") {
    Rng rng(0x5eed0006);
    for (int round = 0; round < 100; ++round) {
        rdf::KnowledgeGraph a = testsupport::random_graph(rng, 20);
        rdf::KnowledgeGraph b = testsupport::random_graph(rng, 20);
        rdf::KnowledgeGraph c = testsupport::random_graph(rng, 20);

        rdf::KnowledgeGraph self = a;
        self.merge(a);
        REQUIRE(self == a);

        rdf::KnowledgeGraph ab = a;
        ab.merge(b);
        rdf::KnowledgeGraph ba = b;
        ba.merge(a);
        // Prefix maps may differ in declaration source, triple sets must not.
        REQUIRE(ab.triples() == ba.triples());

        rdf::KnowledgeGraph ab_c = ab;
        ab_c.merge(c);
        rdf::KnowledgeGraph bc = b;
        bc.merge(c);
        rdf::KnowledgeGraph a_bc = a;
        a_bc.merge(bc);
        REQUIRE(ab_c.triples() == a_bc.triples());
    }
}

// ---------------------------------------------------------------------------

TEST_CASE("half-up percentage equals exact rational rounding") {
    for (std::size_t total = 0; total <= 60; ++total) {
        for (std::size_t count = 0; count <= total; ++count) {
            int got = audit::half_up_percentage(count, total);
            int want = 0;
            if (total != 0) {
                std::size_t quotient = (100 * count) / total;
                std::size_t remainder = (100 * count) % total;
                want = static_cast<int>(quotient) + (2 * remainder >= total ? 1 : 0);
            }
            CAPTURE(count);
            CAPTURE(total);
            REQUIRE(got == want);
        }
    }
}
