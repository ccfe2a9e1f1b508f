#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sphqmc {

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(std::vector<std::string> row);
  std::size_t column_index(const std::string& name) const;
  // Parses a numeric column; empty cells are rejected.
  std::vector<double> column(const std::string& name) const;

  void write(std::ostream& out) const;
  static CsvTable read(std::istream& in);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Shortest decimal form that round-trips.
std::string format_double(double v);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares on (log x, log y). Needs at least 4 points, all positive.
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y);
SlopeFit fit_slope(const CsvTable& table, const std::string& x, const std::string& y);

}  // namespace sphqmc
