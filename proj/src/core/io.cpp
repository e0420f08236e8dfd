#include "gammalab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gammalab/errors.hpp"

namespace gammalab {

void Config::set(const std::string& key, const std::string& value) {
  items_.emplace_back(key, value);
}

const std::string* Config::find(const std::string& key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return &v;
  return nullptr;
}

std::string Config::get(const std::string& key) const {
  const std::string* v = find(key);
  require(v != nullptr, ErrorCode::invalid_argument,
          "config: missing key '" + key + "'");
  return *v;
}

std::string Config::get_or(const std::string& key,
                           const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

double Config::number(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::invalid_argument, "config: key '" + key + "' is not numeric");
  }
}

double Config::number_or(const std::string& key, double fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  return number(key);
}

std::vector<double> Config::number_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty(), ErrorCode::invalid_argument,
            "config: empty element in list '" + key + "'");
    out.push_back(std::stod(item));
  }
  require(!out.empty(), ErrorCode::invalid_argument,
          "config: list '" + key + "' is empty");
  return out;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : items_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      fail(ErrorCode::invalid_argument, "config: unknown key '" + k + "'");
  }
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::invalid_argument,
            "config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
      value.erase(value.begin());
    require(!key.empty(), ErrorCode::invalid_argument,
            "config line " + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io_error, "config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

double parse_gamma(const std::string& text, double gamma_crit) {
  if (auto pos = text.find("crit"); pos != std::string::npos) {
    require(pos + 4 == text.size(), ErrorCode::invalid_argument,
            "gamma: expected '<factor>crit', got '" + text + "'");
    double factor = pos == 0 ? 1.0 : std::stod(text.substr(0, pos));
    return factor * gamma_crit;
  }
  return std::stod(text);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  require(out.good(), ErrorCode::io_error, "csv: cannot open " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_quote(header[i]);
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_quote(row[i]);
    out << "\n";
  }
  require(out.good(), ErrorCode::io_error, "csv: write failed for " + path);
}

namespace {

struct Ticks {
  std::vector<double> at;
};

Ticks nice_ticks(double lo, double hi) {
  Ticks t;
  double span = hi - lo;
  if (span <= 0) span = 1.0;
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  double first = std::ceil(lo / step) * step;
  for (double v = first; v <= hi + 1e-12 * span; v += step) t.at.push_back(v);
  return t;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series,
                    std::optional<double> reference_y) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (reference_y) {
    ymin = std::min(ymin, *reference_y);
    ymax = std::max(ymax, *reference_y);
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  double ypad = 0.05 * (ymax - ymin + 1e-12);
  ymin -= ypad;
  ymax += ypad;

  const double w = 640, h = 440, ml = 70, mr = 20, mt = 40, mb = 55;
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
  };
  auto py = [&](double y) {
    return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
  };

  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_error, "svg: cannot open " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << w << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  for (double v : nice_ticks(xmin, xmax).at) {
    out << "<line x1=\"" << px(v) << "\" y1=\"" << h - mb << "\" x2=\"" << px(v)
        << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(v) << "\" y=\"" << h - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_number(v) << "</text>\n";
  }
  for (double v : nice_ticks(ymin, ymax).at) {
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << ml
        << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_number(v) << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (mt + h - mb) / 2 << ")\">" << ylabel
      << "</text>\n";

  if (reference_y) {
    out << "<line x1=\"" << ml << "\" y1=\"" << py(*reference_y) << "\" x2=\""
        << w - mr << "\" y2=\"" << py(*reference_y)
        << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";
  }

  int label_row = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << px(s.x[i]) << "," << py(s.y[i]) << " ";
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    if (!s.label.empty()) {
      out << "<text x=\"" << w - mr - 6 << "\" y=\"" << mt + 14 * ++label_row
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"12\" fill=\""
          << s.color << "\">" << s.label << "</text>\n";
    }
  }
  out << "</svg>\n";
  require(out.good(), ErrorCode::io_error, "svg: write failed for " + path);
}

}  // namespace gammalab
