#include "spilab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spilab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  return std::string(buf);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::io_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::io_error, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Csv::comment(const std::string& line) { comments_.push_back("# " + line); }

void Csv::columns(std::vector<std::string> names) { names_ = std::move(names); }

void Csv::row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  rows_.push_back(std::move(line));
}

void Csv::row_mixed(const std::vector<std::string>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += values[i];
  }
  rows_.push_back(std::move(line));
}

std::string Csv::str() const {
  std::string out;
  for (const auto& c : comments_) out += c + "\n";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) out += ',';
    out += names_[i];
  }
  if (!names_.empty()) out += "\n";
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

Json Json::object() { return Json{}; }

Json Json::array() {
  Json j;
  j.value_ = ArrTag{};
  return j;
}

Json Json::number(double v) {
  Json j;
  j.value_ = v;
  return j;
}

Json Json::integer(std::int64_t v) {
  Json j;
  j.value_ = v;
  return j;
}

Json Json::string(std::string v) {
  Json j;
  j.value_ = std::move(v);
  return j;
}

Json Json::boolean(bool v) {
  Json j;
  j.value_ = v;
  return j;
}

Json& Json::set(const std::string& key, Json v) {
  members_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  elements_.push_back(std::move(v));
  return *this;
}

namespace {
void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}
}  // namespace

void Json::render(std::string& out, int indent, int depth) const {
  auto pad = [&](int d) {
    if (indent > 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  if (std::holds_alternative<ObjTag>(value_)) {
    out += '{';
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) out += ',';
      pad(depth + 1);
      escape_into(out, members_[i].first);
      out += indent > 0 ? ": " : ":";
      members_[i].second.render(out, indent, depth + 1);
    }
    if (!members_.empty()) pad(depth);
    out += '}';
  } else if (std::holds_alternative<ArrTag>(value_)) {
    out += '[';
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (i) out += ',';
      pad(depth + 1);
      elements_[i].render(out, indent, depth + 1);
    }
    if (!elements_.empty()) pad(depth);
    out += ']';
  } else if (std::holds_alternative<double>(value_)) {
    double v = std::get<double>(value_);
    if (std::isfinite(v))
      out += format_double(v);
    else
      escape_into(out, format_double(v));  // JSON has no inf/nan literals
  } else if (std::holds_alternative<std::int64_t>(value_)) {
    out += std::to_string(std::get<std::int64_t>(value_));
  } else if (std::holds_alternative<std::string>(value_)) {
    escape_into(out, std::get<std::string>(value_));
  } else {
    out += std::get<bool>(value_) ? "true" : "false";
  }
}

std::string Json::str(int indent) const {
  std::string out;
  render(out, indent, 0);
  out += '\n';
  return out;
}

std::string svg_chart(const std::string& title, const std::vector<Series>& series, bool log_x) {
  const double width = 720, height = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(tx(s.x[i])) || !std::isfinite(s.y[i])) continue;
      x_min = std::min(x_min, tx(s.x[i]));
      x_max = std::max(x_max, tx(s.x[i]));
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;
  auto px = [&](double x) { return ml + (tx(x) - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
  out += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";
  // axes
  out += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(height - mb) + "\" x2=\"" +
         format_double(width - mr) + "\" y2=\"" + format_double(height - mb) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
         format_double(ml) + "\" y2=\"" + format_double(height - mb) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = x_min + (x_max - x_min) * i / 4.0;
    double yv = y_min + (y_max - y_min) * i / 4.0;
    char label[64];
    std::snprintf(label, sizeof(label), log_x ? "1e%.2g" : "%.4g", xv);
    out += "<text x=\"" + format_double(ml + (width - ml - mr) * i / 4.0) + "\" y=\"" +
           format_double(height - mb + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label +
           "</text>\n";
    std::snprintf(label, sizeof(label), "%.4g", yv);
    out += "<text x=\"" + format_double(ml - 8) + "\" y=\"" +
           format_double(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label +
           "</text>\n";
  }
  int color = 0;
  double legend_y = mt + 8;
  for (const auto& s : series) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(tx(s.x[i])) || !std::isfinite(s.y[i])) continue;
      pts += format_double(px(s.x[i])) + "," + format_double(py(s.y[i])) + " ";
    }
    const char* col = palette[color % 5];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" "
           "points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + format_double(width - mr - 8) + "\" y=\"" + format_double(legend_y) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + col +
           "\">" + s.label + "</text>\n";
    legend_y += 16;
    ++color;
  }
  out += "</svg>\n";
  return out;
}

std::string profile_csv(const CapacityProfile& profile, const std::string& header_comment) {
  Csv csv;
  if (!header_comment.empty()) csv.comment(header_comment);
  csv.columns({"kappa", "c_kappa"});
  for (std::size_t i = 0; i < profile.kappa.size(); ++i)
    csv.row({profile.kappa[i], profile.c_kappa[i]});
  return csv.str();
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::size_t n_cols,
                                                  std::vector<std::string>* comments) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (comments) comments->push_back(line);
      continue;
    }
    if (!header_skipped && line.find_first_not_of("0123456789+-.eE, \r") != std::string::npos) {
      header_skipped = true;  // column header
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != n_cols)
      throw Error(Errc::parse_error, "bad row in " + path.string() + ": " + line);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

CapacityProfile read_profile_csv(const std::filesystem::path& path) {
  auto rows = read_numeric_csv(path, 2, nullptr);
  if (rows.empty()) throw Error(Errc::empty_input, "empty profile in " + path.string());
  CapacityProfile p;
  for (const auto& r : rows) {
    p.kappa.push_back(r[0]);
    p.c_kappa.push_back(r[1]);
  }
  p.normalize();
  return p;
}

std::string beta_csv(double r0, const std::vector<double>& r, const std::vector<double>& beta,
                     const std::string& header_comment) {
  Csv csv;
  if (!header_comment.empty()) csv.comment(header_comment);
  csv.comment("r0=" + format_double(r0));
  csv.columns({"r", "beta"});
  for (std::size_t i = 0; i < r.size(); ++i) csv.row({r[i], beta[i]});
  return csv.str();
}

BetaTable read_beta_csv(const std::filesystem::path& path) {
  std::vector<std::string> comments;
  auto rows = read_numeric_csv(path, 2, &comments);
  if (rows.empty()) throw Error(Errc::empty_input, "empty beta table in " + path.string());
  BetaTable t;
  for (const auto& c : comments) {
    auto pos = c.find("r0=");
    if (pos != std::string::npos) t.r0 = std::strtod(c.c_str() + pos + 3, nullptr);
  }
  for (const auto& r : rows) {
    t.r.push_back(r[0]);
    t.beta.push_back(r[1]);
  }
  return t;
}

}  // namespace spilab::io
