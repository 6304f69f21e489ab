#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "axiomlab/assignment.hpp"
#include "axiomlab/preferences.hpp"

namespace axiomlab {

/// Text formats.
///
/// Profile: one line per agent, `<agent>: <obj>(">"<obj>)*`. The object index
/// order is fixed by the first agent's ranking.
///
/// Matrix: a header row of object names, then one line per agent of
/// whitespace-separated rationals (`p/q` or an integer). Rows follow the
/// paired profile's agent order.
PreferenceProfile parse_profile(const std::string& text);
std::string format_profile(const PreferenceProfile& profile);

struct ParsedMatrix {
  std::vector<std::string> objects;
  RatMatrix entries;  // validated bistochastic
};

ParsedMatrix parse_matrix(const std::string& text);
std::string format_matrix(const std::vector<std::string>& objects, const RatMatrix& m);
std::string format_matrix(const PreferenceProfile& profile, const Assignment& a);

/// Reorders a parsed matrix's columns to the profile's object order and
/// validates the object sets match.
Assignment align_matrix(const ParsedMatrix& parsed, const PreferenceProfile& profile);

/// Table files: repeated (profile block, matrix block) pairs separated by
/// blank lines.
std::vector<std::pair<PreferenceProfile, Assignment>> parse_table(const std::string& text);
std::string format_table(const std::vector<std::pair<PreferenceProfile, Assignment>>& rows);

/// JSON mirrors: {"agents":[...],"objects":[...],"orders":{...},"matrix":[[...]]}.
/// Rationals are rendered bit-exactly as strings; no floating point exists.
nlohmann::json profile_to_json(const PreferenceProfile& profile);
PreferenceProfile profile_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const RatMatrix& m);
nlohmann::json assignment_to_json(const PreferenceProfile& profile, const Assignment& a);
Assignment assignment_from_json(const nlohmann::json& j, const PreferenceProfile& profile);

}  // namespace axiomlab
