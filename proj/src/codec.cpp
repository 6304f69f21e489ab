#include "axiomlab/codec.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace axiomlab {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

PreferenceProfile parse_profile(const std::string& text) {
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> rankings;
  for (const auto& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(ParseError::Kind::Syntax, "profile line missing ':': " + line);
    agents.push_back(trim(line.substr(0, colon)));
    std::vector<std::string> objs;
    std::string token;
    for (char c : line.substr(colon + 1)) {
      if (c == '>') {
        if (trim(token).empty())
          throw ParseError(ParseError::Kind::MalformedRanking, "empty object name in: " + line);
        objs.push_back(trim(token));
        token.clear();
      } else {
        token += c;
      }
    }
    if (!trim(token).empty()) objs.push_back(trim(token));
    if (objs.empty())
      throw ParseError(ParseError::Kind::MalformedRanking, "empty ranking for " + agents.back());
    rankings.push_back(std::move(objs));
  }
  if (agents.empty()) throw ParseError(ParseError::Kind::Syntax, "empty profile");

  // Canonical object order comes from the first agent's ranking.
  const std::vector<std::string>& objects = rankings.front();
  const size_t n = agents.size();
  if (objects.size() != n)
    throw ParseError(ParseError::Kind::MalformedRanking,
                     "profile must rank as many objects as there are agents");
  auto objectAt = [&](const std::string& name) -> int {
    for (size_t j = 0; j < objects.size(); ++j)
      if (objects[j] == name) return static_cast<int>(j);
    return -1;
  };
  std::vector<PreferenceOrder> orders;
  for (size_t i = 0; i < n; ++i) {
    if (rankings[i].size() != n)
      throw ParseError(ParseError::Kind::MalformedRanking,
                       "agent " + agents[i] + " ranks " + std::to_string(rankings[i].size()) +
                           " objects, expected " + std::to_string(n));
    std::vector<int> ranked;
    std::vector<bool> seen(n, false);
    for (const auto& name : rankings[i]) {
      int j = objectAt(name);
      if (j < 0)
        throw ParseError(ParseError::Kind::MalformedRanking,
                         "agent " + agents[i] + " ranks unknown object '" + name + "'");
      if (seen[static_cast<size_t>(j)])
        throw ParseError(ParseError::Kind::MalformedRanking,
                         "agent " + agents[i] + " ranks object '" + name + "' twice");
      seen[static_cast<size_t>(j)] = true;
      ranked.push_back(j);
    }
    orders.emplace_back(std::move(ranked));
  }
  try {
    return PreferenceProfile(agents, objects, std::move(orders));
  } catch (const InputError& e) {
    throw ParseError(ParseError::Kind::MalformedRanking, e.what());
  }
}

std::string format_profile(const PreferenceProfile& profile) {
  std::string out;
  for (int i = 0; i < profile.size(); ++i) {
    out += profile.agentName(i) + ": ";
    for (int r = 0; r < profile.size(); ++r) {
      if (r) out += ">";
      out += profile.objectName(profile.order(i).at(r));
    }
    out += "\n";
  }
  return out;
}

ParsedMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split_tokens(line));
  }
  if (rows.size() < 2) throw ParseError(ParseError::Kind::Syntax, "matrix needs a header and rows");
  ParsedMatrix out;
  out.objects = rows.front();
  const size_t n = out.objects.size();
  if (rows.size() != n + 1)
    throw ParseError(ParseError::Kind::Syntax,
                     "matrix has " + std::to_string(rows.size() - 1) + " rows, expected " +
                         std::to_string(n));
  out.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    if (rows[i + 1].size() != n)
      throw ParseError(ParseError::Kind::Syntax,
                       "matrix row " + std::to_string(i + 1) + " has wrong width");
    for (size_t j = 0; j < n; ++j) {
      try {
        out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            Rational::fromString(rows[i + 1][j]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(ParseError::Kind::MalformedRational, e.what());
      }
    }
  }
  validate_bistochastic(out.entries);
  return out;
}

std::string format_matrix(const std::vector<std::string>& objects, const RatMatrix& m) {
  std::string out;
  for (size_t j = 0; j < objects.size(); ++j) {
    if (j) out += " ";
    out += objects[j];
  }
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += " ";
      out += m(i, j).str();
    }
    out += "\n";
  }
  return out;
}

std::string format_matrix(const PreferenceProfile& profile, const Assignment& a) {
  return format_matrix(profile.objectNames(), a.matrix());
}

Assignment align_matrix(const ParsedMatrix& parsed, const PreferenceProfile& profile) {
  const int n = profile.size();
  if (static_cast<int>(parsed.objects.size()) != n)
    throw InputError("matrix and profile have different object counts");
  RatMatrix m(n, n);
  for (int j = 0; j < n; ++j) {
    auto target = profile.objectIndex(parsed.objects[static_cast<size_t>(j)]);
    if (!target)
      throw InputError("matrix column '" + parsed.objects[static_cast<size_t>(j)] +
                       "' not an object of the profile");
    for (int i = 0; i < n; ++i) m(i, *target) = parsed.entries(i, j);
  }
  return Assignment(std::move(m));
}

std::vector<std::pair<PreferenceProfile, Assignment>> parse_table(const std::string& text) {
  std::vector<std::string> block;
  std::vector<std::string> blocks;
  for (const auto& raw : split_lines(text)) {
    if (trim(raw).empty()) {
      if (!block.empty()) {
        std::string joined;
        for (const auto& l : block) joined += l + "\n";
        blocks.push_back(joined);
        block.clear();
      }
    } else {
      block.push_back(raw);
    }
  }
  if (!block.empty()) {
    std::string joined;
    for (const auto& l : block) joined += l + "\n";
    blocks.push_back(joined);
  }
  if (blocks.size() % 2 != 0)
    throw ParseError(ParseError::Kind::Syntax,
                     "table file must alternate profile and matrix blocks");
  std::vector<std::pair<PreferenceProfile, Assignment>> out;
  for (size_t b = 0; b < blocks.size(); b += 2) {
    PreferenceProfile p = parse_profile(blocks[b]);
    Assignment a = align_matrix(parse_matrix(blocks[b + 1]), p);
    out.emplace_back(std::move(p), std::move(a));
  }
  return out;
}

std::string format_table(const std::vector<std::pair<PreferenceProfile, Assignment>>& rows) {
  std::string out;
  for (const auto& [p, a] : rows) {
    out += format_profile(p);
    out += "\n";
    out += format_matrix(p, a);
    out += "\n";
  }
  return out;
}

nlohmann::json profile_to_json(const PreferenceProfile& profile) {
  nlohmann::json j;
  j["agents"] = profile.agentNames();
  j["objects"] = profile.objectNames();
  nlohmann::json orders = nlohmann::json::object();
  for (int i = 0; i < profile.size(); ++i) {
    std::vector<std::string> names;
    for (int r = 0; r < profile.size(); ++r)
      names.push_back(profile.objectName(profile.order(i).at(r)));
    orders[profile.agentName(i)] = names;
  }
  j["orders"] = orders;
  return j;
}

PreferenceProfile profile_from_json(const nlohmann::json& j) {
  std::vector<std::string> agents = j.at("agents").get<std::vector<std::string>>();
  std::vector<std::string> objects = j.at("objects").get<std::vector<std::string>>();
  auto objectAt = [&](const std::string& name) -> int {
    for (size_t k = 0; k < objects.size(); ++k)
      if (objects[k] == name) return static_cast<int>(k);
    throw ParseError(ParseError::Kind::MalformedRanking, "unknown object '" + name + "'");
  };
  std::vector<PreferenceOrder> orders;
  for (const auto& agent : agents) {
    auto names = j.at("orders").at(agent).get<std::vector<std::string>>();
    std::vector<int> ranked;
    for (const auto& name : names) ranked.push_back(objectAt(name));
    try {
      orders.emplace_back(std::move(ranked));
    } catch (const InputError& e) {
      throw ParseError(ParseError::Kind::MalformedRanking, e.what());
    }
  }
  try {
    return PreferenceProfile(std::move(agents), std::move(objects), std::move(orders));
  } catch (const InputError& e) {
    throw ParseError(ParseError::Kind::MalformedRanking, e.what());
  }
}

nlohmann::json matrix_to_json(const RatMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json assignment_to_json(const PreferenceProfile& profile, const Assignment& a) {
  nlohmann::json j = profile_to_json(profile);
  j["matrix"] = matrix_to_json(a.matrix());
  return j;
}

Assignment assignment_from_json(const nlohmann::json& j, const PreferenceProfile& profile) {
  const auto& rows = j.at("matrix");
  const int n = profile.size();
  if (static_cast<int>(rows.size()) != n)
    throw ParseError(ParseError::Kind::Syntax, "matrix row count mismatch");
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
      throw ParseError(ParseError::Kind::Syntax, "matrix column count mismatch");
    for (int c = 0; c < n; ++c) {
      try {
        m(i, c) = Rational::fromString(
            rows[static_cast<size_t>(i)][static_cast<size_t>(c)].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ParseError(ParseError::Kind::MalformedRational, e.what());
      }
    }
  }
  return Assignment(std::move(m));
}

}  // namespace axiomlab
