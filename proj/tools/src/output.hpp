#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringqpe::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, '.' decimal point, locale independent.
[[nodiscard]] std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::string render() const;
};

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line plot: fixed 800x500 viewBox, one polyline per series.
[[nodiscard]] std::string svg_line_plot(const std::string& title, const std::string& x_label,
                                        const std::string& y_label, const std::vector<Series>& series);

// Output directory with atomic (temp file + rename) writes.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  // Creates the directory if needed; throws IoError.
  void ensure() const;
  void write(const std::string& name, const std::string& content) const;
  [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace ringqpe::cli
