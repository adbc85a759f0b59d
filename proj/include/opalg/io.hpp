#pragma once

#include <json.hpp>

#include "opalg/cocycle.hpp"
#include "opalg/conv_algebra.hpp"
#include "opalg/fell_bundle.hpp"
#include "opalg/section_algebra.hpp"

namespace opalg {

using ojson = nlohmann::ordered_json;

/// Groupoid together with its (possibly defaulted) Haar system, as read from a file.
struct GroupoidInput {
    GroupoidPtr g;
    HaarSystem haar;
    bool haar_explicit = false;
};

ojson groupoid_to_json(const FiniteGroupoid& g, const HaarSystem* haar = nullptr);
GroupoidInput groupoid_from_json(const ojson& j);

ojson function_to_json(const GroupoidFunction& f);
/// `values` object keyed by arrow id, entries [re, im]; missing arrows are 0.
GroupoidFunction function_from_json(const ojson& j, const GroupoidPtr& g);

ojson cocycle_to_json(const TCocycle& s);
/// `vals` object keyed by "g|h"; missing composable pairs are 0.
TCocycle cocycle_from_json(const ojson& j, const GroupoidPtr& g);

ojson bundle_to_json(const FellBundle& b);
/// dims/mult/invol keyed by arrow id resp. "g|h"; tensors nested [out][left][right].
FellBundle bundle_from_json(const ojson& j, const GroupoidPtr& g);

ojson section_to_json(const Section& s);
Section section_from_json(const ojson& j, const FellBundlePtr& b);

ojson load_json_file(const std::string& path);
void write_json_file(const std::string& path, const ojson& j);

/// Resolves a "groupoid" reference that is either a path string (relative to
/// base_dir) or an inline groupoid object; absent -> error.
GroupoidInput resolve_groupoid_ref(const ojson& j, const std::string& base_dir);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string content_digest(const ojson& j);

} // namespace opalg
