#include <cinttypes>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "advnet/harness.hpp"

namespace advnet::sim {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fmt_count(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

struct Column {
  const char* header;
  std::function<std::string(const Report&)> value;
};

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      {"adversary_set", [](const Report& r) { return r.adversary_set; }},
      {"strategy", [](const Report& r) { return r.strategy; }},
      {"trials", [](const Report& r) { return fmt_count(r.trials); }},
      {"decode_errors",
       [](const Report& r) { return fmt_count(r.decode_errors); }},
      {"rank_failures",
       [](const Report& r) { return fmt_count(r.rank_failures); }},
      {"verifications",
       [](const Report& r) { return fmt_count(r.verifications); }},
      {"corrupted_deliveries",
       [](const Report& r) { return fmt_count(r.corrupted_deliveries); }},
      {"false_accepts",
       [](const Report& r) { return fmt_count(r.false_accepts); }},
      {"isolation_events",
       [](const Report& r) { return fmt_count(r.isolation_events); }},
      {"empirical_pe",
       [](const Report& r) { return fmt_double(r.empirical_pe); }},
      {"false_accept_rate",
       [](const Report& r) { return fmt_double(r.false_accept_rate); }},
      {"false_accept_halfwidth",
       [](const Report& r) { return fmt_double(r.false_accept_halfwidth); }},
      {"forge_bound", [](const Report& r) { return fmt_double(r.forge_bound); }},
      {"error_bound", [](const Report& r) { return fmt_double(r.error_bound); }},
      {"cut_bound", [](const Report& r) { return fmt_double(r.cut_bound); }},
      {"rate", [](const Report& r) { return fmt_double(r.rate); }},
  };
  return cols;
}

}  // namespace

std::string to_csv(const std::vector<Report>& rows) {
  std::string out;
  const auto& cols = columns();
  for (size_t c = 0; c < cols.size(); ++c) {
    if (c) out += ',';
    out += cols[c].header;
  }
  out += '\n';
  for (const Report& r : rows) {
    for (size_t c = 0; c < cols.size(); ++c) {
      if (c) out += ',';
      out += cols[c].value(r);
    }
    out += '\n';
  }
  return out;
}

std::string to_text(const std::vector<Report>& rows) {
  const auto& cols = columns();
  // Precompute every cell, then pad columns to their widest entry.
  std::vector<std::vector<std::string>> grid;
  grid.emplace_back();
  for (const auto& c : cols) grid.back().push_back(c.header);
  for (const Report& r : rows) {
    grid.emplace_back();
    for (const auto& c : cols) grid.back().push_back(c.value(r));
  }
  std::vector<size_t> width(cols.size(), 0);
  for (const auto& row : grid)
    for (size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  std::string out;
  for (const auto& row : grid) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += row[c];
      if (c + 1 < row.size())
        out.append(width[c] - row[c].size(), ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace advnet::sim
