#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfnorm/approximations.hpp"
#include "selfnorm/montecarlo.hpp"
#include "selfnorm/saddlepoint.hpp"

namespace selfnorm {

struct TableRow {
  double b = 0.0;
  std::optional<double> true_mc;
  std::optional<double> saddle;
  std::optional<double> re_saddle;
  std::optional<double> normal;
  std::optional<double> re_normal;
  std::optional<double> edgeworth;
  std::optional<double> re_edgeworth;
  std::optional<double> ld;
  std::optional<double> re_ld;
};

/// Column order of the CSV header and of each JSON row object.
inline constexpr std::string_view kTableHeader =
    "b,true_mc,saddle,re_saddle,normal,re_normal,edgeworth,re_edgeworth,ld,re_ld";

/// "start:stop:step", inclusive of stop up to rounding. Empty when start > stop.
std::vector<double> parse_b_grid(std::string_view text);

struct TableRequest {
  int n = 5;
  std::vector<double> b_grid;
  std::vector<Method> methods;
  /// Every row uses the same seed, so the MC column is monotone in b.
  McConfig mc;
  SolverConfig solver;
  NormalScaling normal_scaling = NormalScaling::sqrt_n;
};

struct Table {
  std::vector<TableRow> rows;
  /// Cells left empty because the method is undefined there (e.g. no finite skewness).
  std::vector<std::string> notes;
};

/// Domain errors leave the cell empty and add a note; numerical failures propagate.
Table build_table(const DistributionModel& dist, const TableRequest& request);

/// |approx - truth| / truth, absent unless both are present and truth > 0.
std::optional<double> relative_error(std::optional<double> approx, std::optional<double> truth);

std::string to_csv(const std::vector<TableRow>& rows);
std::vector<TableRow> parse_csv(std::string_view text);
std::string to_json(const std::vector<TableRow>& rows, const std::string& metadata_json = "{}");
std::vector<TableRow> parse_json(std::string_view text);

}  // namespace selfnorm
