#include "fairnets/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "fairnets/errors.hpp"

namespace fairnets::ingest {

namespace {

using nlohmann::json;

bool is_digit_span(std::string_view s, std::size_t at, std::size_t count) {
    if (at + count > s.size()) return false;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[at + i]))) return false;
    }
    return true;
}

// "YYYY-MM-DDThh:mm:ssZ"
bool is_utc_timestamp(std::string_view s) {
    return s.size() == 20 && is_digit_span(s, 0, 4) && s[4] == '-' && is_digit_span(s, 5, 2) &&
           s[7] == '-' && is_digit_span(s, 8, 2) && s[10] == 'T' && is_digit_span(s, 11, 2) &&
           s[13] == ':' && is_digit_span(s, 14, 2) && s[16] == ':' && is_digit_span(s, 17, 2) &&
           s[19] == 'Z';
}

std::string require_timestamp(const json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end() || !it->is_string()) {
        throw MappingError(std::string("missing timestamp field: ") + field);
    }
    std::string value = it->get<std::string>();
    if (!is_utc_timestamp(value)) {
        throw MappingError(std::string("invalid timestamp in field: ") + field);
    }
    return value;
}

std::optional<std::string> optional_text(const json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end() || !it->is_string()) return std::nullopt;
    std::string value = it->get<std::string>();
    if (value.empty()) return std::nullopt;
    return value;
}

Iri require_iri(const std::string& value, const char* field) {
    auto iri = Iri::parse(value);
    if (!iri) throw MappingError(std::string("invalid IRI in field: ") + field);
    return *iri;
}

// ---------------------------------------------------------------------------
// Link scanning

bool has_scheme_at(std::string_view text, std::size_t at, std::size_t* scheme_len) {
    if (text.compare(at, 8, "https://") == 0) {
        *scheme_len = 8;
        return true;
    }
    if (text.compare(at, 7, "http://") == 0) {
        *scheme_len = 7;
        return true;
    }
    return false;
}

bool is_link_end(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '>' || c == '"' ||
           c == '`' || c == '\'' || c == '|';
}

std::string trim_link(std::string link) {
    for (;;) {
        if (link.empty()) return link;
        char last = link.back();
        if (last == '.' || last == ',' || last == ';' || last == ':' || last == '!' ||
            last == '?' || last == '\'' || last == '"' || last == '*') {
            link.pop_back();
            continue;
        }
        if (last == ')' && link.find('(') == std::string::npos) {
            link.pop_back();
            continue;
        }
        if (last == ']' && link.find('[') == std::string::npos) {
            link.pop_back();
            continue;
        }
        if (last == '}' && link.find('{') == std::string::npos) {
            link.pop_back();
            continue;
        }
        return link;
    }
}

std::vector<std::string> scan_links(std::string_view text) {
    std::vector<std::string> links;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t scheme_len = 0;
        if (!has_scheme_at(text, at, &scheme_len)) {
            ++at;
            continue;
        }
        std::size_t end = at + scheme_len;
        while (end < text.size() && !is_link_end(text[end])) ++end;
        std::string link = trim_link(std::string(text.substr(at, end - at)));
        if (link.size() > scheme_len) links.push_back(std::move(link));
        at = end;
    }
    return links;
}

std::string host_of(std::string_view url) {
    std::size_t start = url.find("//");
    if (start == std::string_view::npos) return "";
    start += 2;
    std::size_t end = start;
    while (end < url.size() && url[end] != '/' && url[end] != '?' && url[end] != '#') ++end;
    std::string host(url.substr(start, end - start));
    std::transform(host.begin(), host.end(), host.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return host;
}

std::string_view path_of(std::string_view url) {
    std::size_t start = url.find("//");
    if (start == std::string_view::npos) return "";
    start = url.find('/', start + 2);
    if (start == std::string_view::npos) return "";
    return url.substr(start);
}

bool is_badge_host(const std::string& host, const std::vector<std::string>& denylist) {
    for (const std::string& entry : denylist) {
        if (host == entry) return true;
        if (host.size() > entry.size() + 1 &&
            host.compare(host.size() - entry.size() - 1, entry.size() + 1, "." + entry) == 0) {
            return true;
        }
    }
    return false;
}

// pdf form -> abs form, ".pdf" suffix dropped.
std::string normalize_arxiv(std::string url) {
    std::string host = host_of(url);
    if (host != "arxiv.org" && host != "www.arxiv.org") return url;
    std::size_t pdf = url.find("/pdf/");
    if (pdf != std::string::npos) {
        url.replace(pdf, 5, "/abs/");
        if (url.size() > 4 && url.compare(url.size() - 4, 4, ".pdf") == 0) {
            url.erase(url.size() - 4);
        }
    }
    return url;
}

bool is_arxiv_abs(std::string_view url) {
    std::string host = host_of(url);
    if (host != "arxiv.org" && host != "www.arxiv.org") return false;
    std::string_view path = path_of(url);
    return path.size() > 5 && path.compare(0, 5, "/abs/") == 0;
}

bool is_doi_url(std::string_view url) {
    std::string host = host_of(url);
    if (host != "doi.org" && host != "dx.doi.org") return false;
    std::string_view path = path_of(url);
    return path.size() > 4 && path.compare(0, 4, "/10.") == 0;
}

// ---------------------------------------------------------------------------
// BibTeX blocks

struct BibBlock {
    std::size_t begin;   // offset of '@'
    std::size_t end;     // offset past the closing brace
    std::string_view body;
};

std::vector<BibBlock> find_bib_blocks(std::string_view text) {
    std::vector<BibBlock> blocks;
    std::size_t at = 0;
    while ((at = text.find('@', at)) != std::string_view::npos) {
        std::size_t name_end = at + 1;
        while (name_end < text.size() &&
               std::isalpha(static_cast<unsigned char>(text[name_end]))) {
            ++name_end;
        }
        if (name_end == at + 1 || name_end >= text.size() || text[name_end] != '{') {
            ++at;
            continue;
        }
        int depth = 0;
        std::size_t scan = name_end;
        std::size_t close = std::string_view::npos;
        for (; scan < text.size(); ++scan) {
            if (text[scan] == '{') ++depth;
            if (text[scan] == '}') {
                if (--depth == 0) {
                    close = scan;
                    break;
                }
            }
        }
        if (close == std::string_view::npos) break;   // unbalanced; stop scanning
        blocks.push_back({at, close + 1, text.substr(name_end + 1, close - name_end - 1)});
        at = close + 1;
    }
    return blocks;
}

// `key = {value}` / `key = "value"` inside a BibTeX body.
std::vector<std::string> bib_field_values(std::string_view body, std::string_view key) {
    std::vector<std::string> values;
    std::size_t at = 0;
    while (at < body.size()) {
        std::size_t hit = std::string_view::npos;
        for (std::size_t probe = at; probe + key.size() <= body.size(); ++probe) {
            bool word_start =
                probe == 0 || !std::isalnum(static_cast<unsigned char>(body[probe - 1]));
            if (!word_start) continue;
            bool match = true;
            for (std::size_t i = 0; i < key.size(); ++i) {
                if (std::tolower(static_cast<unsigned char>(body[probe + i])) != key[i]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                hit = probe;
                break;
            }
        }
        if (hit == std::string_view::npos) break;
        std::size_t cursor = hit + key.size();
        while (cursor < body.size() && std::isspace(static_cast<unsigned char>(body[cursor]))) {
            ++cursor;
        }
        if (cursor >= body.size() || body[cursor] != '=') {
            at = hit + key.size();
            continue;
        }
        ++cursor;
        while (cursor < body.size() && std::isspace(static_cast<unsigned char>(body[cursor]))) {
            ++cursor;
        }
        if (cursor >= body.size()) break;
        char open = body[cursor];
        if (open == '{' || open == '"') {
            char close = open == '{' ? '}' : '"';
            std::size_t value_end = body.find(close, cursor + 1);
            if (value_end == std::string_view::npos) break;
            values.emplace_back(body.substr(cursor + 1, value_end - cursor - 1));
            at = value_end + 1;
        } else {
            at = cursor;
        }
    }
    return values;
}

std::string strip_spaces(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c) != 0; }),
            s.end());
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------

RepositoryRecord map_repository(const RawRepoDocument& raw) {
    const json& doc = raw.metadata;
    if (!doc.is_object()) throw MappingError("metadata document is not an object");

    RepositoryRecord record;
    auto full_name = optional_text(doc, "full_name");
    if (!full_name) throw MappingError("missing field: full_name");
    record.full_name = *full_name;
    std::size_t slash = record.full_name.find('/');
    if (slash == std::string::npos || slash != record.full_name.rfind('/') || slash == 0 ||
        slash + 1 == record.full_name.size()) {
        throw MappingError("malformed full_name: " + record.full_name);
    }

    record.created_at = require_timestamp(doc, "created_at");
    record.updated_at = require_timestamp(doc, "updated_at");
    if (record.updated_at < record.created_at) {
        throw MappingError("updated_at precedes created_at");
    }

    if (auto html = optional_text(doc, "html_url")) {
        record.html_url = require_iri(*html, "html_url");
    } else {
        record.html_url = require_iri("https://github.com/" + record.full_name, "html_url");
    }

    std::optional<std::string> owner_url;
    if (auto owner = doc.find("owner"); owner != doc.end() && owner->is_object()) {
        owner_url = optional_text(*owner, "html_url");
    }
    if (!owner_url) {
        owner_url = "https://github.com/" + record.full_name.substr(0, slash);
    }
    record.owner_url = require_iri(*owner_url, "owner.html_url");

    record.description = optional_text(doc, "description");
    if (!raw.readme.empty()) record.readme = raw.readme;

    std::optional<std::string> license_id = raw.license_id;
    if (!license_id) {
        if (auto license = doc.find("license"); license != doc.end() && license->is_object()) {
            license_id = optional_text(*license, "spdx_id");
        }
    }
    record.license_iri = normalize_license(license_id);

    if (auto watchers = doc.find("watchers_count"); watchers != doc.end()) {
        if (!watchers->is_number_integer()) {
            throw MappingError("invalid field: watchers_count");
        }
        record.watchers_count = watchers->get<std::int64_t>();
        if (record.watchers_count < 0) throw MappingError("negative watchers_count");
    }

    record.topics = raw.topics;
    if (record.topics.empty()) {
        if (auto topics = doc.find("topics"); topics != doc.end() && topics->is_array()) {
            for (const json& topic : *topics) {
                if (topic.is_string()) record.topics.push_back(topic.get<std::string>());
            }
        }
    }
    std::sort(record.topics.begin(), record.topics.end());
    record.topics.erase(std::unique(record.topics.begin(), record.topics.end()),
                        record.topics.end());

    if (auto name = optional_text(doc, "name")) {
        record.name = *name;
    } else {
        record.name = record.full_name.substr(slash + 1);
    }
    return record;
}

const std::vector<std::string>& default_badge_hosts() {
    static const std::vector<std::string> hosts = {
        "img.shields.io", "shields.io",      "badge.fury.io",  "badges.gitter.im",
        "travis-ci.org",  "travis-ci.com",   "ci.appveyor.com", "circleci.com",
        "codecov.io",     "coveralls.io",    "codeclimate.com", "api.codacy.com",
        "app.codacy.com", "badgen.net",
    };
    return hosts;
}

std::vector<Reference> extract_references(std::string_view readme) {
    return extract_references(readme, {});
}

std::vector<Reference> extract_references(std::string_view readme,
                                          const std::vector<std::string>& extra_badge_hosts) {
    std::vector<std::string> denylist = default_badge_hosts();
    denylist.insert(denylist.end(), extra_badge_hosts.begin(), extra_badge_hosts.end());

    std::vector<Reference> references;
    std::set<std::string> seen;
    auto add = [&](std::string url, Reference::Kind kind) {
        url = normalize_arxiv(std::move(url));
        if (is_badge_host(host_of(url), denylist)) return;
        auto iri = Iri::parse(url);
        if (!iri) return;
        if (!seen.insert(url).second) return;
        references.push_back({std::move(*iri), kind});
    };

    // Pass 1: arXiv links anywhere in the text.
    for (const std::string& link : scan_links(readme)) {
        std::string normalized = normalize_arxiv(link);
        if (is_arxiv_abs(normalized)) add(normalized, Reference::Kind::Scholarly);
    }

    // Pass 2: url/doi fields of BibTeX blocks.
    for (const BibBlock& block : find_bib_blocks(readme)) {
        for (const std::string& value : bib_field_values(block.body, "url")) {
            std::string url = normalize_arxiv(trim_link(strip_spaces(value)));
            if (url.empty()) continue;
            bool scholarly = is_arxiv_abs(url) || is_doi_url(url);
            add(url, scholarly ? Reference::Kind::Scholarly : Reference::Kind::SeeAlso);
        }
        for (const std::string& value : bib_field_values(block.body, "doi")) {
            std::string doi = strip_spaces(value);
            if (doi.empty()) continue;
            add("https://doi.org/" + doi, Reference::Kind::Scholarly);
        }
    }

    // Pass 3: everything else; DOI-shaped links stay scholarly so the
    // classification is stable under re-extraction.
    for (const std::string& link : scan_links(readme)) {
        std::string normalized = normalize_arxiv(link);
        if (is_arxiv_abs(normalized) || is_doi_url(normalized)) {
            add(normalized, Reference::Kind::Scholarly);
        } else {
            add(normalized, Reference::Kind::SeeAlso);
        }
    }
    return references;
}

bool is_scholarly_url(std::string_view url) {
    return is_arxiv_abs(url) || is_doi_url(url);
}

std::optional<Iri> normalize_license(const std::optional<std::string>& spdx_id) {
    static const std::set<std::string> known = {
        "0BSD",         "AFL-3.0",      "AGPL-3.0",         "AGPL-3.0-only",
        "AGPL-3.0-or-later", "Apache-2.0", "Artistic-2.0",  "BSD-2-Clause",
        "BSD-3-Clause", "BSD-3-Clause-Clear", "BSD-4-Clause", "BSL-1.0",
        "CC-BY-4.0",    "CC-BY-SA-4.0", "CC0-1.0",          "ECL-2.0",
        "EPL-1.0",      "EPL-2.0",      "EUPL-1.1",         "EUPL-1.2",
        "GPL-2.0",      "GPL-2.0-only", "GPL-2.0-or-later", "GPL-3.0",
        "GPL-3.0-only", "GPL-3.0-or-later", "ISC",          "LGPL-2.1",
        "LGPL-2.1-only", "LGPL-2.1-or-later", "LGPL-3.0",   "LGPL-3.0-only",
        "LGPL-3.0-or-later", "LPPL-1.3c", "MIT",            "MPL-2.0",
        "MS-PL",        "MS-RL",        "NCSA",             "OFL-1.1",
        "OSL-3.0",      "PostgreSQL",   "Unlicense",        "WTFPL",
        "Zlib",
    };
    if (!spdx_id || *spdx_id == "NOASSERTION" || !known.count(*spdx_id)) return std::nullopt;
    return Iri::parse("https://spdx.org/licenses/" + *spdx_id);
}

}  // namespace fairnets::ingest
