#pragma once

#include <json.hpp>

#include "torsorkit/cleft_twist.hpp"
#include "torsorkit/fixtures.hpp"

namespace torsorkit {

// A document that does not describe a valid bundle. pointer is a JSON pointer
// into the document ("" for the root).
class ParseError : public Error {
public:
    ParseError(std::string pointer, const std::string& msg)
        : Error((pointer.empty() ? std::string("/") : pointer) + ": " + msg), pointer(std::move(pointer)) {}
    std::string pointer;
};

// Bundle document layout:
//   "format": "torsorkit-bundle/1", "name", "field": "Q" | {"GF": p}
//   "algebras": {key: {"dim", "labels", "unit": [..], "structure": [[i, j, k, "p/q"], ..]}}
//       the key "k" with dim 1 is the ground field
//   "roles": {"A", "B", "T": algebra keys, "torsor": bool}
//   "maps": {"alpha", "beta", "tau": {"rows", "cols", "entries": ["p/q", ..]}}  dense row-major;
//       tau is the k-level lift T -> T (x) T (x) T
//   "twist" (optional): {"H": algebra key, "delta", "eps", "antipode", "coaction", "j",
//       "j_tilde", "action", "sigma", "sigma_tilde": maps}
struct BundleDocument {
    PreTorsorBundle bundle;
    std::optional<CleftData> cleft;
};

nlohmann::json export_bundle(const PreTorsorBundle& b, const std::optional<CleftData>& cleft = std::nullopt);
nlohmann::json export_fixture(const Fixture& fx);

// field overrides the document's field when given; throws ParseError
BundleDocument import_bundle(const nlohmann::json& doc, std::optional<Field> field = std::nullopt);
BundleDocument import_bundle_text(const std::string& text, std::optional<Field> field = std::nullopt);

// the canonical text of a document: sorted keys, two-space indent, trailing newline
std::string canonical_text(const nlohmann::json& doc);

nlohmann::json matrix_json(const Matrix& m);
nlohmann::json report_json(const Report& r);

} // namespace torsorkit
