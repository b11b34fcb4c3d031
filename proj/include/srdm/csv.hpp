#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srdm/analysis.hpp"
#include "srdm/glicko.hpp"

namespace srdm {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    std::size_t b = field.find_first_not_of(" \t\r");
    std::size_t e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

// Fixed-width float rendering so identical runs produce identical bytes.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Votes from a CSV with header `winner,loser`.
inline std::vector<VoteRecord> load_votes_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  std::vector<VoteRecord> votes;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (fields.size() >= 2 && fields[0] == "winner") continue;  // header
    }
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty())
      throw std::runtime_error(path + ": malformed vote line: " + line);
    votes.push_back({fields[0], fields[1]});
  }
  return votes;
}

// Method scores from a CSV with header `method,metric,glicko[,backproj]`.
inline MethodScoreTable load_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  MethodScoreTable table;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (!fields.empty() && fields[0] == "method") continue;
    }
    if (fields.size() < 3) throw std::runtime_error(path + ": malformed score line: " + line);
    MethodScore row;
    row.method_id = fields[0];
    row.metric_score = std::stod(fields[1]);
    row.glicko = std::stod(fields[2]);
    if (fields.size() >= 4 && !fields[3].empty()) row.backproj = std::stod(fields[3]);
    table.rows.push_back(row);
  }
  return table;
}

// Single column of reals, header line optional.
inline std::vector<double> load_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (fields.empty() || fields[0].empty()) continue;
    try {
      values.push_back(std::stod(fields[0]));
    } catch (const std::invalid_argument&) {
      if (values.empty()) continue;  // header
      throw std::runtime_error(path + ": non-numeric value: " + line);
    }
  }
  return values;
}

}  // namespace srdm
