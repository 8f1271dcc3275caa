#include "selfnorm/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "selfnorm/error.hpp"

namespace selfnorm {

namespace {

using Field = std::optional<double> TableRow::*;

constexpr std::array<Field, 9> kFields = {&TableRow::true_mc,   &TableRow::saddle,      &TableRow::re_saddle,
                                          &TableRow::normal,    &TableRow::re_normal,   &TableRow::edgeworth,
                                          &TableRow::re_edgeworth, &TableRow::ld,       &TableRow::re_ld};
constexpr std::array<std::string_view, 9> kFieldNames = {"true_mc",   "saddle",       "re_saddle",
                                                         "normal",    "re_normal",    "edgeworth",
                                                         "re_edgeworth", "ld",        "re_ld"};

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto r = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

std::string format6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<double> parse_b_grid(std::string_view text) {
  std::array<double, 3> parts{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto colon = text.find(':', start);
    if ((i < 2) == (colon == std::string_view::npos)) {
      throw Error(ErrorKind::ParseError, "b-grid must look like start:stop:step, got '" + std::string(text) + "'");
    }
    parts[i] = parse_double(text.substr(start, i < 2 ? colon - start : std::string_view::npos), "b-grid");
    start = colon + 1;
  }
  const auto [lo, hi, step] = parts;
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::ParseError, "b-grid needs finite bounds and a positive step");
  }
  std::vector<double> grid;
  if (lo > hi) return grid;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw Error(ErrorKind::ParseError, "b-grid has too many points");
  for (long i = 0; i < count; ++i) {
    // Snap to 1e-12 so 0.05 * 3 prints as 0.15.
    grid.push_back(std::round((lo + i * step) * 1e12) / 1e12);
  }
  return grid;
}

std::optional<double> relative_error(std::optional<double> approx, std::optional<double> truth) {
  if (!approx || !truth || !(*truth > 0.0)) return std::nullopt;
  return std::fabs(*approx - *truth) / *truth;
}

Table build_table(const DistributionModel& dist, const TableRequest& request) {
  Table table;
  auto wants = [&](Method m) {
    return std::find(request.methods.begin(), request.methods.end(), m) != request.methods.end();
  };
  for (double b : request.b_grid) {
    TableRow row;
    row.b = b;
    auto fill = [&](Method m, std::optional<double>& cell, auto&& compute) {
      if (!wants(m)) return;
      try {
        cell = compute();
      } catch (const Error& e) {
        if (!e.is_domain_error()) throw;
        table.notes.push_back("b = " + format6(b) + ", " + std::string(to_string(m)) + ": " + e.what());
      }
    };
    fill(Method::monte_carlo, row.true_mc, [&] { return estimate_tail(dist, request.n, b, request.mc).p_hat; });
    fill(Method::saddlepoint, row.saddle,
         [&] { return saddle_upper_tail(dist, request.n, b, request.solver).probability; });
    fill(Method::normal, row.normal,
         [&] { return normal_tail(request.n, b, request.normal_scaling).probability; });
    fill(Method::edgeworth, row.edgeworth, [&] { return edgeworth_tail(dist, request.n, b).probability; });
    fill(Method::large_deviation, row.ld,
         [&] { return large_deviation_tail(dist, request.n, b, request.solver).probability; });
    row.re_saddle = relative_error(row.saddle, row.true_mc);
    row.re_normal = relative_error(row.normal, row.true_mc);
    row.re_edgeworth = relative_error(row.edgeworth, row.true_mc);
    row.re_ld = relative_error(row.ld, row.true_mc);
    table.rows.push_back(row);
  }
  return table;
}

std::string to_csv(const std::vector<TableRow>& rows) {
  std::string out(kTableHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += format6(row.b);
    for (Field f : kFields) {
      out += ',';
      if (row.*f) out += format6(*(row.*f));
    }
    out += '\n';
  }
  return out;
}

std::vector<TableRow> parse_csv(std::string_view text) {
  std::vector<TableRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) {
    throw Error(ErrorKind::ParseError, "CSV header does not match the table columns");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (cells.size() != kFields.size() + 1) throw Error(ErrorKind::ParseError, "CSV row has the wrong width");
    TableRow row;
    row.b = parse_double(cells[0], "CSV");
    for (std::size_t i = 0; i < kFields.size(); ++i) {
      if (!cells[i + 1].empty()) row.*kFields[i] = parse_double(cells[i + 1], "CSV");
    }
    rows.push_back(row);
  }
  return rows;
}

std::string to_json(const std::vector<TableRow>& rows, const std::string& metadata_json) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::parse(metadata_json);
  auto& arr = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    obj["b"] = row.b;
    for (std::size_t i = 0; i < kFields.size(); ++i) {
      const auto& cell = row.*kFields[i];
      obj[std::string(kFieldNames[i])] = cell ? nlohmann::ordered_json(*cell) : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

std::vector<TableRow> parse_json(std::string_view text) {
  std::vector<TableRow> rows;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& obj : doc.at("rows")) {
      TableRow row;
      row.b = obj.at("b").get<double>();
      for (std::size_t i = 0; i < kFields.size(); ++i) {
        const auto& v = obj.at(std::string(kFieldNames[i]));
        if (!v.is_null()) row.*kFields[i] = v.get<double>();
      }
      rows.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("table JSON: ") + e.what());
  }
  return rows;
}

}  // namespace selfnorm
