#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rqbc {

enum class ReportFormat { Text, Json, Csv };

ReportFormat parse_format(const std::string& name);

/// One computed quantity. Stochastic rows carry trials and standard error.
struct ReportRow {
  std::string quantity;
  std::optional<double> value;
  std::optional<std::string> text;  // non-numeric values such as a verdict
  std::optional<double> reference;
  std::optional<bool> pass;
  std::optional<std::uint64_t> trials;
  std::optional<double> standard_error;
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<ReportRow> rows;
  std::vector<std::string> transcript;  // free-form lines, e.g. message log

  ReportRow& add(std::string quantity, double value);
  ReportRow& add_text(std::string quantity, std::string text);

  /// False if any row carries pass == false.
  bool all_passed() const;
};

/// Constants and values are printed to 10 significant digits in text and
/// csv; json carries full double precision.
std::string render(const Report& report, ReportFormat format);

std::string format_number(double v);

}  // namespace rqbc
