#pragma once

// JSON and CSV renderings of every result type, and atomic file output.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>

#include "hzeta/construction.hpp"
#include "hzeta/density.hpp"
#include "hzeta/ideals.hpp"
#include "hzeta/structure.hpp"
#include "hzeta/zeros.hpp"
#include "hzeta/zeta.hpp"

namespace hzeta {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

template <class R>
std::string decimal(const R& v, int digits = 30) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

template <class R>
double dbl(const R& v) {
  return static_cast<double>(v);
}

template <class R>
json complex_json(const std::complex<R>& z) {
  return json{{"re", dbl(z.real())}, {"im", dbl(z.imag())}};
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Report skeleton: schema version, command, resolved config, seed, timestamp.
inline json report_header(const std::string& command, const json& config, u64 seed) {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["timestamp"] = utc_timestamp();
  return j;
}

/// The report with its timestamp removed, for comparisons between runs.
inline json without_timestamp(json j) {
  if (j.is_object()) j.erase("timestamp");
  return j;
}

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::invalid_argument, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw error(errc::invalid_argument, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw error(errc::invalid_argument, "cannot move report into " + path.string() + ": " + ec.message());
  }
}

// ---------------------------------------------------------------------------

inline json to_json(const PrimeIdealKey& k) { return json{{"p", k.p}, {"root", k.root}}; }

inline json to_json(const IdealFactorizationRecord& r) {
  json adm = json::array();
  for (const auto& [k, e] : r.admissible) adm.push_back(json{{"p", k.p}, {"root", k.root}, {"exponent", e}});
  return json{{"n", r.n}, {"norm", to_string(r.norm)}, {"admissible", adm}, {"residual", to_string(r.residual)}};
}

/// "p:root^e p:root^e ..."
inline std::string admissible_field(const IdealFactorizationRecord& r) {
  std::string s;
  for (const auto& [k, e] : r.admissible) {
    if (!s.empty()) s += ' ';
    s += std::to_string(k.p) + ":" + std::to_string(k.root) + "^" + std::to_string(e);
  }
  return s;
}

inline std::string ideal_csv_header() { return "n,norm,admissible,residual\n"; }
inline std::string ideal_csv_row(const IdealFactorizationRecord& r) {
  return std::to_string(r.n) + "," + to_string(r.norm) + "," + admissible_field(r) + "," + to_string(r.residual) + "\n";
}

inline json to_json(const WindowSpec& w) {
  return json{{"N", w.N}, {"theta", w.theta.str()}, {"M", w.M()}, {"q", w.q}, {"b", w.b}};
}

inline json to_json(const DensityReport& r) {
  json elig = json::array();
  for (const auto& e : r.eligible) elig.push_back(json{{"n", e.n}, {"p", e.key.p}, {"root", e.key.root}, {"exponent", e.exponent}});
  return json{{"window", to_json(r.window)},
              {"class_size", r.class_size},
              {"count_A", r.count_A},
              {"threshold", r.threshold},
              {"fraction", r.fraction},
              {"passed", r.passed},
              {"eligible", elig},
              {"ineligible", r.ineligible},
              {"smooth", r.smooth},
              {"smooth_count", r.smooth.size()},
              {"rho", r.rho}};
}

inline json to_json(const SweepReport& s) {
  json w = json::array();
  for (const auto& r : s.windows) w.push_back(to_json(r));
  return json{{"windows", w},
              {"mean_fraction", s.mean_fraction},
              {"windows_below_floor", s.below_floor},
              {"aggregate_passed", s.aggregate_passed}};
}

inline std::string density_csv_header() { return "N,b,n,eligible,p,root,exponent,smooth\n"; }
inline std::string density_csv_rows(const DensityReport& r) {
  std::map<u64, std::string> rows;
  auto smooth = [&](u64 n) { return std::binary_search(r.smooth.begin(), r.smooth.end(), n) ? "1" : "0"; };
  for (const auto& e : r.eligible)
    rows[e.n] = std::to_string(r.window.N) + "," + std::to_string(r.window.b) + "," + std::to_string(e.n) + ",1," +
                std::to_string(e.key.p) + "," + std::to_string(e.key.root) + "," + std::to_string(e.exponent) + "," + smooth(e.n) + "\n";
  for (u64 n : r.ineligible)
    rows[n] = std::to_string(r.window.N) + "," + std::to_string(r.window.b) + "," + std::to_string(n) + ",0,,,," + smooth(n) + "\n";
  std::string s;
  for (const auto& [n, row] : rows) s += row;
  return s;
}

inline json to_json(const DirichletCharacter& chi) {
  return json{{"modulus", chi.modulus}, {"conductor", chi.conductor}, {"order", chi.order}, {"index", chi.index}};
}

inline json to_json(const DirichletPolynomial& P) {
  json co = json::array();
  for (const auto& [n, c] : P.coeffs()) co.push_back(json{{"n", n}, {"coeff", c.str()}});
  return json{{"field_order", P.field_order()}, {"coeffs", co}, {"text", P.str()}};
}

inline json to_json(const LiftedSeries& l) {
  return json{{"b", l.b}, {"support_class", l.support_class}, {"period", l.coeffs.period()}, {"g", l.coeffs.str()}};
}

inline json to_json(const DecompositionResult& d) {
  json terms = json::array();
  for (const auto& t : d.terms) terms.push_back(json{{"character", to_json(t.chi)}, {"polynomial", to_json(t.poly)}});
  return json{{"period", d.period}, {"terms", terms}, {"verification_period", d.verification_period}, {"verified", d.verified}};
}

inline json to_json(const PLCertificate& c) {
  json j{{"verdict", to_string(c.verdict)}, {"proof_kind", to_string(c.proof_kind)}};
  if (c.verdict == PLVerdict::IsPL) {
    j["polynomial"] = to_json(c.polynomial);
    j["character"] = to_json(*c.character);
    j["verification_period"] = c.verification_period;
  }
  if (c.proof_kind == PLProof::ResidueObstruction) {
    j["residue_h"] = c.residue_h;
    j["residue_r"] = c.residue_r;
  }
  j["conductors_searched"] = c.conductors_searched;
  j["characters_tried"] = c.characters_tried;
  return j;
}

inline json to_json(const Rectangle& r) {
  return json{{"sigma_min", r.sigma_min}, {"sigma_max", r.sigma_max}, {"t_min", r.t_min}, {"t_max", r.t_max}};
}

inline json to_json(const RefinedZero& z) {
  return json{{"sigma", z.z.real()}, {"t", z.z.imag()}, {"residual", z.residual}, {"multiplicity", z.multiplicity}, {"converged", z.converged}};
}

inline json to_json(const WindingResult& w) {
  json zs = json::array();
  for (const auto& z : w.refined_zeros) zs.push_back(to_json(z));
  return json{{"rect", to_json(w.rect)},
              {"winding", w.winding},
              {"min_boundary_modulus", w.min_boundary_modulus},
              {"samples", w.samples},
              {"refined_zeros", zs}};
}

inline json to_json(const ZeroSearchResult& r) {
  json cells = json::array(), zs = json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  for (const auto& z : r.zeros) zs.push_back(to_json(z));
  return json{{"region", to_json(r.region)}, {"attempts", r.attempts}, {"cells", cells}, {"zeros", zs}};
}

inline std::string zeros_csv_header() { return "sigma,t,residual,multiplicity,converged\n"; }
inline std::string zeros_csv_rows(const ZeroSearchResult& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& z : r.zeros)
    os << z.z.real() << ',' << z.z.imag() << ',' << z.residual << ',' << z.multiplicity << ',' << (z.converged ? 1 : 0) << '\n';
  return os.str();
}

inline json to_json(const VerdictReport& v) {
  json j{{"verdict", v.verdict}, {"evidence", v.evidence}};
  if (v.certificate) j["certificate"] = to_json(*v.certificate);
  if (v.p_scan_region) j["p_scan_region"] = to_json(*v.p_scan_region);
  json zs = json::array();
  for (const auto& z : v.p_zeros) zs.push_back(to_json(z));
  j["p_zeros"] = zs;
  return j;
}

inline json to_json(const ConstructionProfile& p) {
  return json{{"name", p.name},          {"theta", p.theta.str()},       {"density_floor", p.density_floor},
              {"contraction", p.contraction.str()}, {"min_A_size", p.min_A_size}, {"N1", p.N1},
              {"delta", p.delta},        {"digits", p.digits},           {"consistent", p.consistent()}};
}

template <class R>
json to_json(const SigmaCertificate<R>& s) {
  json cls = json::array();
  for (std::size_t b = 0; b < s.head.size(); ++b)
    cls.push_back(json{{"b", b}, {"head", decimal(s.head[b])}, {"tail", decimal(s.tail[b])}, {"error_bound", dbl(s.bound[b])}});
  return json{{"sigma", decimal(s.sigma)}, {"holds", s.holds}, {"bisection_steps", s.bisection_steps}, {"classes", cls}};
}

template <class R>
json to_json(const StageReport<R>& s) {
  json cls = json::array();
  for (const auto& c : s.classes)
    cls.push_back(json{{"b", c.b},
                       {"size_A", c.size_A},
                       {"size_B", c.size_B},
                       {"S1", dbl(c.S1)},
                       {"S2", dbl(c.S2)},
                       {"S3", dbl(c.S3)},
                       {"S4", dbl(c.S4)},
                       {"Lambda", complex_json(c.Lambda)},
                       {"target", complex_json(c.target)},
                       {"target_clamped", c.target_clamped},
                       {"achieved_residual", dbl(c.bohr_residual)},
                       {"class_sum_abs", decimal(c.after_abs)},
                       {"class_bound", decimal(c.bound)},
                       {"bound_ok", c.bound_ok},
                       {"ratio_ok", c.ratio_ok},
                       {"s3_s2_gap_ok", c.inequality_ok},
                       {"induction_ok", c.induction_ok}});
  return json{{"j", s.j},
              {"N_j", s.N_j},
              {"M_j", s.M_j},
              {"N_next", s.N_next},
              {"classes", cls},
              {"new_private_phases", s.case2},
              {"new_unit_phases", s.case3},
              {"total_abs", decimal(s.total_abs)},
              {"total_rhs", decimal(s.total_rhs)},
              {"induction_ok", s.induction_ok},
              {"all_ok", s.all_ok}};
}

template <class R>
std::string phi_csv(const PhiAssignment<R>& phi) {
  std::ostringstream os;
  os << "p,root,phase,stage,case\n" << std::setprecision(17);
  for (const auto& [k, e] : phi.entries())
    os << k.p << ',' << k.root << ',' << dbl(detail::carg(e.phase)) << ',' << e.stage << ',' << e.case_kind << '\n';
  return os.str();
}

template <class R>
json to_json(const ConstructionReport<R>& r) {
  json st = json::array();
  for (const auto& s : r.stages) st.push_back(to_json(s));
  json j{{"profile", to_json(r.profile)},
         {"sigma", to_json(r.sigma)},
         {"stages", st},
         {"N_final", r.N_final},
         {"final_sum", json{{"re", decimal(r.final_sum.real())}, {"im", decimal(r.final_sum.imag())}}},
         {"final_sum_abs", decimal(detail::cabs(r.final_sum))},
         {"final_rhs", decimal(r.final_rhs)},
         {"envelope_ok", r.envelope_ok},
         {"phi_entries", r.phi.size()},
         {"all_ok", r.all_ok}};
  if (r.halted) j["halted"] = *r.halted;
  return j;
}

inline json to_json(const CanonicalStageCheck& c) {
  json cls = json::array();
  for (const auto& r : c.classes) cls.push_back(json{{"b", r.window.b}, {"count_A", r.count_A}, {"class_size", r.class_size}});
  return json{{"N1", c.N1}, {"M1", c.M1}, {"required", c.required}, {"classes", cls}, {"passed", c.passed}};
}

}  // namespace hzeta
