#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spilab/capacity.hpp"
#include "spilab/error.hpp"

namespace spilab::io {

/// Locale-independent shortest-faithful formatting with 17 significant digits.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data);

/// Writes through a temporary file and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Column-oriented CSV with '#' comment headers ('.' decimal, no locale).
class Csv {
public:
  void comment(const std::string& line);
  void columns(std::vector<std::string> names);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  std::string str() const;

private:
  std::vector<std::string> comments_;
  std::vector<std::string> names_;
  std::vector<std::string> rows_;
};

/// Minimal JSON value with deterministic 17-digit number formatting.
class Json {
public:
  static Json object();
  static Json array();
  static Json number(double v);
  static Json integer(std::int64_t v);
  static Json string(std::string v);
  static Json boolean(bool v);

  Json& set(const std::string& key, Json v);   // object
  Json& push(Json v);                          // array
  std::string str(int indent = 0) const;

private:
  struct ObjTag {};
  struct ArrTag {};
  using Value = std::variant<ObjTag, ArrTag, double, std::int64_t, std::string, bool>;
  Value value_ = ObjTag{};
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> elements_;
  void render(std::string& out, int indent, int depth) const;
};

/// Self-contained SVG polyline chart (log-x when requested); one series per
/// (label, xs, ys) triple.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
std::string svg_chart(const std::string& title, const std::vector<Series>& series, bool log_x);

/// Capacity profiles round-trip through CSV as (kappa, c_kappa) rows.
std::string profile_csv(const CapacityProfile& profile, const std::string& header_comment);
CapacityProfile read_profile_csv(const std::filesystem::path& path);

/// Beta tables serialize as (r, beta) rows with r0 carried in a comment.
std::string beta_csv(double r0, const std::vector<double>& r, const std::vector<double>& beta,
                     const std::string& header_comment);
struct BetaTable {
  double r0 = 0;
  std::vector<double> r;
  std::vector<double> beta;
};
BetaTable read_beta_csv(const std::filesystem::path& path);

}  // namespace spilab::io
