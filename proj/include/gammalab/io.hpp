#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gammalab {

/// Ordered key=value configuration ('#' starts a comment, blank lines ok).
class Config {
 public:
  void set(const std::string& key, const std::string& value);
  const std::string* find(const std::string& key) const;
  std::string get(const std::string& key) const;  // throws if missing
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::vector<double> number_list(const std::string& key) const;  // comma-split
  /// Throws on keys outside `allowed` (typos are config errors, not defaults).
  void require_known(const std::vector<std::string>& allowed) const;

  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

/// "0.5", "crit", "0.5crit", "1.5crit" -> numeric gamma given gamma_crit.
double parse_gamma(const std::string& text, double gamma_crit);

/// Fixed-format numeric text used in every artifact ('.' decimal, %.12g).
std::string format_number(double x);

/// RFC-4180-style CSV: LF line endings, fields quoted only when needed.
/// `comments` are emitted first as '# key=value' header lines.
void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct PlotSeries {
  std::vector<double> x, y;
  std::string label;
  std::string color = "#1f6fb2";
};

/// Minimal SVG 1.1 polyline plot with optional horizontal reference line.
/// Deterministic output (no timestamps).
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series,
                    std::optional<double> reference_y);

}  // namespace gammalab
