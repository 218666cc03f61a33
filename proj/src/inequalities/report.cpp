#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "popctl/inequalities.hpp"
#include "util/io.hpp"

namespace popctl {

void InequalityReport::add(int sample_id, double s, double lhs, double rhs) {
  AuditSample a;
  a.sample_id = sample_id;
  a.s = s;
  a.lhs = lhs;
  a.rhs = rhs;
  if (lhs == 0.0 && rhs == 0.0) {
    a.excluded = true;
    a.ratio = std::numeric_limits<double>::quiet_NaN();
  } else if (rhs <= 0.0) {
    a.violation = lhs > 0.0;
    a.ratio = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    a.ratio = lhs / rhs;
  }
  if (a.violation) violation = true;
  if (!a.excluded && !a.violation) {
    empirical_constant = std::max(empirical_constant, a.ratio);
    bool found = false;
    for (auto& [sv, c] : constant_by_s)
      if (sv == s) {
        c = std::max(c, a.ratio);
        found = true;
      }
    if (!found) constant_by_s.emplace_back(s, a.ratio);
    if (bound && a.ratio > *bound) bound_holds = false;
  }
  samples.push_back(a);
}

std::size_t InequalityReport::counted() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += !s.excluded && !s.violation;
  return n;
}

void InequalityReport::write_csv(const std::filesystem::path& path) const {
  std::FILE* fp = io::open_out(path);
  std::fputs("sample_id,s,lhs,rhs,ratio\n", fp);
  for (const auto& s : samples)
    std::fprintf(fp, "%d,%s,%s,%s,%s\n", s.sample_id, io::num(s.s).c_str(), io::num(s.lhs).c_str(),
                 io::num(s.rhs).c_str(), io::num(s.ratio).c_str());
  std::fclose(fp);
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

void InequalityReport::write_json(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["empirical_constant"] = finite_or_null(empirical_constant);
  j["samples"] = samples.size();
  j["counted"] = counted();
  j["sweep"] = sweep;
  auto& by_s = j["constant_by_s"] = nlohmann::ordered_json::array();
  for (const auto& [s, c] : constant_by_s) by_s.push_back({{"s", s}, {"constant", c}});
  j["refinement_trace"] = refinement_trace;
  j["s_used"] = s_used;
  j["unstable"] = unstable;
  j["violation"] = violation;
  if (bound) {
    j["bound"] = *bound;
    j["bound_holds"] = bound_holds;
  }
  if (grid)
    j["grid"] = {{"T", grid->T}, {"A", grid->A}, {"Nt", grid->Nt}, {"Na", grid->Na},
                 {"Nx", grid->Nx}, {"x_lo", grid->x_lo}, {"x_hi", grid->x_hi}};
  j["seed"] = seed;
  std::FILE* fp = io::open_out(path);
  const std::string text = j.dump(2) + "\n";
  std::fwrite(text.data(), 1, text.size(), fp);
  std::fclose(fp);
}

}  // namespace popctl
