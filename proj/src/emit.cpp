#include "nmrdiscord/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrd {

namespace {

double value_of(const ResultRow& r, Measure m) {
  switch (m) {
    case Measure::pseudo_concurrence:
      return r.pseudo_concurrence;
    case Measure::concurrence:
      return r.concurrence;
    case Measure::geometric_discord:
      return r.geometric_discord;
    case Measure::entropic_discord:
      return r.entropic_discord.value_or(std::nan(""));
  }
  return std::nan("");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Tick label with a short fixed number of significant digits.
std::string tick_label(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::pseudo_concurrence:
      return "pseudo_concurrence";
    case Measure::concurrence:
      return "concurrence";
    case Measure::geometric_discord:
      return "geometric_discord";
    case Measure::entropic_discord:
      return "entropic_discord";
  }
  return "";
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(const ResultTable& table, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : table.rows) {
    out << format_number(r.omega) << ',' << format_number(r.t) << ',' << format_number(r.pseudo_concurrence)
        << ',' << format_number(r.concurrence) << ',' << format_number(r.geometric_discord) << ',';
    if (r.entropic_discord) out << format_number(*r.entropic_discord);
    out << ',' << format_number(r.min_eigenvalue) << '\n';
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"omega", r.omega},
                    {"t", r.t},
                    {"pseudo_concurrence", r.pseudo_concurrence},
                    {"concurrence", r.concurrence},
                    {"geometric_discord", r.geometric_discord},
                    {"entropic_discord", r.entropic_discord ? nlohmann::json(*r.entropic_discord) : nullptr},
                    {"min_eigenvalue", r.min_eigenvalue}});
  }
  return {{"command", table.command}, {"config", table.config}, {"rows", rows}};
}

std::string to_svg(const ResultTable& table, Measure measure) {
  constexpr double width = 800, height = 480;
  constexpr double left = 90, right = 30, top = 40, bottom = 70;
  const bool by_frequency = table.command == "sweep";

  // Series keyed by sample time for sweeps, a single series otherwise.
  std::map<double, std::vector<std::pair<double, double>>> series;
  for (const auto& r : table.rows) {
    const double y = value_of(r, measure);
    if (!std::isfinite(y)) continue;
    series[by_frequency ? r.t : 0.0].emplace_back(by_frequency ? r.omega : r.t, y);
  }

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& [key, pts] : series) {
    for (const auto& [x, y] : pts) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(table.command + ": " + to_string(measure)) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << tick_label(xv)
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << tick_label(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">"
     << (by_frequency ? "omega [rad/s]" : "t [s]") << "</text>\n";
  os << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << to_string(measure) << "</text>\n";

  int idx = 0;
  for (const auto& [key, pts] : series) {
    const char* color = colors[idx % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : pts) os << format_number(sx(x)) << ',' << format_number(sy(y)) << ' ';
    os << "\"/>\n";
    if (by_frequency) {
      os << "<text x=\"" << left + pw - 4 << "\" y=\"" << top + 14 + 14 * idx << "\" text-anchor=\"end\" fill=\""
         << color << "\">t = " << tick_label(key) << " s</text>\n";
    }
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> emit(const ResultTable& table, std::span<const OutputFormat> formats,
                                        const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  for (OutputFormat f : formats) {
    switch (f) {
      case OutputFormat::csv: {
        auto path = out_dir / (table.command + ".csv");
        write_file(path, to_csv(table));
        written.push_back(path);
        break;
      }
      case OutputFormat::json: {
        auto path = out_dir / (table.command + ".json");
        write_file(path, to_json(table).dump(2) + "\n");
        written.push_back(path);
        break;
      }
      case OutputFormat::svg: {
        std::vector<Measure> measures{Measure::pseudo_concurrence, Measure::concurrence,
                                      Measure::geometric_discord};
        const bool has_entropic = std::any_of(table.rows.begin(), table.rows.end(),
                                              [](const ResultRow& r) { return r.entropic_discord.has_value(); });
        if (has_entropic) measures.push_back(Measure::entropic_discord);
        for (Measure m : measures) {
          auto path = out_dir / (table.command + "_" + to_string(m) + ".svg");
          write_file(path, to_svg(table, m));
          written.push_back(path);
        }
        break;
      }
    }
  }
  return written;
}

}  // namespace nmrd
