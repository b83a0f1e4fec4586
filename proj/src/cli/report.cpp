#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "regdist/cli.hpp"

namespace regdist::cli {

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// RFC 4180 quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

void sort_rows(std::vector<Row>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const Row& l, const Row& r) {
    return std::tie(l.observable, l.kernel, l.a, l.eps) < std::tie(r.observable, r.kernel, r.a, r.eps);
  });
}

std::string to_csv(const std::vector<Row>& rows, const std::optional<std::string>& generated_at) {
  std::ostringstream os;
  os << "observable,kernel,a,eps,numeric,analytic,rel_dev,notes,M20,M21,regime_warning,pass";
  if (generated_at) os << ",generated_at";
  os << "\r\n";
  for (const Row& r : rows) {
    os << csv_field(r.observable) << ',' << csv_field(r.kernel) << ',' << format_number(r.a) << ','
       << format_number(r.eps) << ',' << format_number(r.numeric) << ',' << format_number(r.analytic) << ','
       << format_number(r.rel_dev) << ',' << csv_field(r.notes) << ',' << format_number(r.M20) << ','
       << format_number(r.M21) << ',' << (r.regime_warning ? "true" : "false") << ','
       << (r.pass ? "true" : "false");
    if (generated_at) os << ',' << csv_field(*generated_at);
    os << "\r\n";
  }
  return os.str();
}

nlohmann::json to_json(const std::vector<Row>& rows, const std::optional<std::string>& generated_at) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Row& r : rows) {
    nlohmann::json o;
    o["observable"] = r.observable;
    o["kernel"] = r.kernel;
    o["a"] = json_number(r.a);
    o["eps"] = json_number(r.eps);
    o["numeric"] = json_number(r.numeric);
    o["analytic"] = json_number(r.analytic);
    o["rel_dev"] = json_number(r.rel_dev);
    o["notes"] = r.notes;
    o["M20"] = json_number(r.M20);
    o["M21"] = json_number(r.M21);
    o["regime_warning"] = r.regime_warning;
    o["pass"] = r.pass;
    if (generated_at) o["generated_at"] = *generated_at;
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace regdist::cli
