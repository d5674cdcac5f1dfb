#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairnets/iri.hpp"

namespace fairnets::ingest {

/// One repository as the hosting API describes it: the raw metadata document
/// plus the separately served README and topic list.
struct RawRepoDocument {
    nlohmann::json metadata;                 // must contain full_name
    std::string readme;                      // may be empty
    std::vector<std::string> topics;         // may also live in metadata["topics"]
    std::optional<std::string> license_id;   // SPDX id; falls back to metadata
};

struct RepositoryRecord {
    std::string full_name;        // "owner/repo"
    Iri owner_url;
    Iri html_url;
    std::string created_at;       // ISO-8601 UTC, kept verbatim
    std::string updated_at;
    std::optional<std::string> description;
    std::optional<std::string> readme;
    std::optional<Iri> license_iri;
    std::int64_t watchers_count = 0;
    std::vector<std::string> topics;   // sorted, deduplicated
    std::string name;
};

struct Reference {
    enum class Kind { Scholarly, SeeAlso };
    Iri url;
    Kind kind = Kind::SeeAlso;

    bool operator==(const Reference&) const = default;
};

/// Applies the metadata-field mapping: created_at/updated_at, description and
/// readme as two description sources, html_url, owner html_url, license SPDX
/// id, watchers_count, name, topic names (sorted). Throws MappingError when a
/// required field is missing or malformed, naming the field.
RepositoryRecord map_repository(const RawRepoDocument& raw);

/// Hosts whose links are decorative badges, not references.
const std::vector<std::string>& default_badge_hosts();

/// Scans README text in three passes: arXiv links (pdf form normalized to the
/// abstract form) become Scholarly; `url =` / `doi =` fields inside BibTeX
/// blocks become Scholarly when arXiv/DOI-shaped, otherwise SeeAlso; every
/// other absolute http(s) link becomes SeeAlso, except that DOI-shaped links
/// are always Scholarly. Duplicates keep their first occurrence; badge-host
/// links are dropped.
std::vector<Reference> extract_references(std::string_view readme);
std::vector<Reference> extract_references(std::string_view readme,
                                          const std::vector<std::string>& extra_badge_hosts);

/// Known SPDX id -> https://spdx.org/licenses/<id>; NOASSERTION, unknown ids,
/// and absent input map to absent.
std::optional<Iri> normalize_license(const std::optional<std::string>& spdx_id);

/// True for the URL shapes Scholarly references are restricted to: arXiv
/// abstract pages and DOI resolver links.
bool is_scholarly_url(std::string_view url);

}  // namespace fairnets::ingest
