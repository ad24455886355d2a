#include "rqbc/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rqbc/errors.hpp"

namespace rqbc {

ReportFormat parse_format(const std::string& name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw DomainError("unknown format '" + name + "'");
}

ReportRow& Report::add(std::string quantity, double value) {
  rows.push_back(ReportRow{std::move(quantity), value, std::nullopt, std::nullopt, std::nullopt,
                           std::nullopt, std::nullopt});
  return rows.back();
}

ReportRow& Report::add_text(std::string quantity, std::string text) {
  rows.push_back(ReportRow{std::move(quantity), std::nullopt, std::move(text), std::nullopt,
                           std::nullopt, std::nullopt, std::nullopt});
  return rows.back();
}

bool Report::all_passed() const {
  return std::none_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass == false; });
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

std::string status(const ReportRow& r) {
  if (!r.pass) return "";
  return *r.pass ? "PASS" : "FAIL";
}

std::string value_cell(const ReportRow& r) {
  if (r.text) return *r.text;
  return r.value ? format_number(*r.value) : "";
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string opt_count(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_text(const Report& report) {
  const std::vector<std::string> header = {"quantity", "value", "reference", "trials", "stderr", "status"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    cells.push_back({r.quantity, value_cell(r), opt_number(r.reference), opt_count(r.trials),
                     opt_number(r.standard_error), status(r)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  os << "# " << report.command << " (seed " << report.seed << ")\n";
  for (const auto& line : report.transcript) os << line << '\n';
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      if (c + 1 < row.size()) cell.resize(width[c], ' ');
      line += cell;
      if (c + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  };
  emit(header);
  for (const auto& row : cells) emit(row);
  os << (report.all_passed() ? "result: PASS" : "result: FAIL") << '\n';
  return os.str();
}

std::string render_csv(const Report& report) {
  std::ostringstream os;
  os << "quantity,value,reference,trials,stderr,pass\n";
  for (const auto& r : report.rows) {
    os << csv_escape(r.quantity) << ',' << csv_escape(value_cell(r)) << ',' << opt_number(r.reference) << ','
       << opt_count(r.trials) << ',' << opt_number(r.standard_error) << ','
       << (r.pass ? (*r.pass ? "true" : "false") : "") << '\n';
  }
  return os.str();
}

std::string render_json(const Report& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["seed"] = report.seed;
  j["passed"] = report.all_passed();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["quantity"] = r.quantity;
    if (r.value) row["value"] = *r.value;
    if (r.text) row["value"] = *r.text;
    if (r.reference) row["reference"] = *r.reference;
    if (r.trials) row["trials"] = *r.trials;
    if (r.standard_error) row["stderr"] = *r.standard_error;
    if (r.pass) row["pass"] = *r.pass;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (!report.transcript.empty()) j["transcript"] = report.transcript;
  return j.dump(2) + "\n";
}

}  // namespace

std::string render(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Text: return render_text(report);
    case ReportFormat::Json: return render_json(report);
    case ReportFormat::Csv: return render_csv(report);
  }
  return {};
}

}  // namespace rqbc
