// Copyright 2026 The muwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The subcommands behind the muwork executable. Each returns a JSON report,
// a text rendering and an exit code; nothing here touches stdout.

#pragma once

#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "muwork/asymptotics.hpp"
#include "muwork/cli/json_io.hpp"
#include "muwork/correlation.hpp"
#include "muwork/mixing.hpp"
#include "muwork/moments.hpp"

namespace muwork::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_input = 2, exit_inconclusive = 3, exit_numerical = 4 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::no_certificate: return exit_inconclusive;
    case ErrorKind::numerical:
    case ErrorKind::non_convergence:
    case ErrorKind::stagnation: return exit_numerical;
    default: return exit_input;
  }
}

/// Settings shared by all subcommands.
struct Context {
  /// Factor applied to every tolerance, from MUWORK_TOL_OVERRIDE.
  std::optional<double> tol_override;
  bool timing = false;

  double scale() const { return tol_override.value_or(1.0); }
  Tolerances tolerances() const { return Tolerances{}.scaled(scale()); }
};

/// Reads MUWORK_TOL_OVERRIDE; a value that is not a positive finite number
/// is an input error.
inline std::optional<double> tol_override_from_env() {
  const char* raw = std::getenv("MUWORK_TOL_OVERRIDE");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string s(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v) || v <= 0.0) {
    fail(ErrorKind::parse, "MUWORK_TOL_OVERRIDE must be a positive number, got \"" + s + "\"");
  }
  return v;
}

struct Output {
  json report;
  std::string text;
  int exit_code = exit_ok;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline json header(const std::string& command, const Context& ctx) {
  json env{{"threads", 1}, {"tol_override", ctx.tol_override ? json(*ctx.tol_override) : json(nullptr)}};
  return json{{"tool", "muwork"}, {"version", kVersion}, {"command", command}, {"environment", std::move(env)}};
}

inline void finish(Output& out, const std::string& status, int code, Clock::time_point t0, const Context& ctx) {
  out.report["status"] = status;
  out.report["exit_code"] = code;
  if (ctx.timing) out.report["timing"] = json{{"seconds", seconds_since(t0)}};
  out.exit_code = code;
}

inline json spectral_json(const SpectralReport& s) {
  return json{{"eigenvalues", complex_list_to_json(s.eigenvalues)},
              {"peripheral", complex_list_to_json(s.peripheral)},
              {"period", s.period},
              {"gap", s.gap}};
}

inline json certificate_json(const MixingCertificate& c) {
  return json{{"p_num", c.numerator}, {"p_den", c.denominator}, {"p", c.p()}, {"branch", to_string(c.branch)}};
}

inline std::string blocks_text(const std::vector<Block>& blocks) {
  std::string s = "[";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ", ";
    s += "(" + std::to_string(blocks[i].m) + "," + std::to_string(blocks[i].n) + ")";
  }
  return s + "]";
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline json input_json(const std::string& path, const json& doc) { return json{{"path", path}, {"document", doc}}; }

}  // namespace detail

// -- info ------------------------------------------------------------------------

inline Output cmd_info(const std::string& path, const json& doc, const Context& ctx) {
  const auto t0 = detail::Clock::now();
  const Tolerances tol = ctx.tolerances();
  const Channel phi = channel_from_json(doc, tol);
  Output out;
  out.report = detail::header("info", ctx);
  out.report["input"] = detail::input_json(path, doc);
  out.report["options"] = json::object();

  const RVec spec = hermitian_eigenvalues(phi.choi().mat).reverse();
  json result{{"d", phi.dim()},
              {"flags",
               {{"completely_positive", true},
                {"trace_preserving", phi.is_trace_preserving()},
                {"unital", phi.is_unital()}}},
              {"kraus_rank", phi.kraus().size()},
              {"choi_spectrum", std::vector<double>(spec.data(), spec.data() + spec.size())}};
  const SpectralReport sr = spectral_report(phi);
  result["spectral"] = detail::spectral_json(sr);

  std::string text = "channel on M_" + std::to_string(phi.dim()) + "\n";
  text += "  completely positive: yes\n  trace preserving:    " + detail::yes_no(phi.is_trace_preserving()) +
          "\n  unital:              " + detail::yes_no(phi.is_unital()) + "\n";
  text += "  Kraus rank:          " + std::to_string(phi.kraus().size()) + "\n";
  text += "  spectral gap:        " + detail::num(sr.gap) + "\n";
  text += "  peripheral count:    " + std::to_string(sr.peripheral.size()) + ", period " + std::to_string(sr.period) + "\n";

  if (phi.is_unital_channel()) {
    Rng rng(0x5eed);
    const AlgebraStructure a = fixed_point_algebra(phi, rng, tol);
    const BallTest ball = is_in_guaranteed_ball(phi, a, tol);
    result["fixed_algebra"] = algebra_to_json(a);
    result["certificate"] = detail::certificate_json(ball.certificate);
    result["ball"] = json{{"inside", ball.inside}, {"min_eigenvalue", ball.min_eigenvalue}};
    text += "  fixed algebra:       " + detail::blocks_text(a.blocks()) + " (m,n), D = " + std::to_string(a.D()) + "\n";
    text += "  mixing constant:     p = " + std::to_string(ball.certificate.numerator) + "/" +
            std::to_string(ball.certificate.denominator) + " (" + to_string(ball.certificate.branch) + ")\n";
    text += "  in guaranteed ball:  " + detail::yes_no(ball.inside) + " (min eigenvalue " +
            detail::num(ball.min_eigenvalue) + ")\n";
  } else {
    result["fixed_algebra"] = nullptr;
    result["certificate"] = nullptr;
    result["ball"] = nullptr;
    text += "  fixed algebra:       n/a (not a unital channel)\n";
  }
  out.report["result"] = std::move(result);
  out.text = std::move(text);
  detail::finish(out, "ok", exit_ok, t0, ctx);
  return out;
}

// -- mix -------------------------------------------------------------------------

struct MixOptions {
  std::optional<json> algebra;  // null: the fixed-point algebra
  double tol = 1e-6;
  std::size_t max_atoms = 200;
  std::uint64_t seed = 0;
};

inline Output cmd_mix(const std::string& path, const json& doc, const MixOptions& opt, const Context& ctx) {
  const auto t0 = detail::Clock::now();
  const Tolerances tol = ctx.tolerances();
  const Channel phi = channel_from_json(doc, tol);
  if (!phi.is_unital_channel()) fail(ErrorKind::precondition, "mix needs a unital channel");
  Rng rng(opt.seed);
  const AlgebraStructure a = opt.algebra ? algebra_from_json(*opt.algebra) : fixed_point_algebra(phi, rng, tol);
  if (a.dim() != phi.dim()) fail(ErrorKind::dimension, "algebra and channel dimensions differ");
  auto [target, cert] = general_mix(phi, a, tol);

  Output out;
  out.report = detail::header("mix", ctx);
  out.report["input"] = detail::input_json(path, doc);
  out.report["options"] = json{{"algebra", opt.algebra ? "file" : "auto"},
                               {"tol", opt.tol},
                               {"max_atoms", opt.max_atoms},
                               {"seed", opt.seed}};
  json result{{"algebra", algebra_to_json(a)}, {"certificate", detail::certificate_json(cert)}};
  std::string text = "algebra " + detail::blocks_text(a.blocks()) + ", p = " + std::to_string(cert.numerator) + "/" +
                     std::to_string(cert.denominator) + " (" + to_string(cert.branch) + ")\n";
  ConstructOptions co;
  co.tol = opt.tol * ctx.scale();
  co.max_atoms = opt.max_atoms;
  try {
    const auto dec = construct_mixed_unitary(target, a, co, rng);
    result["decomposition"] = decomposition_to_json(dec);
    result["best_residual"] = residual_json(dec.residual);
    text += "decomposed p*Phi + (1-p)*E_A: " + std::to_string(dec.size()) + " unitaries, residual " + sig3(dec.residual) +
            "\n";
    out.report["result"] = std::move(result);
    out.text = std::move(text);
    detail::finish(out, "certified", exit_ok, t0, ctx);
  } catch (const NoCertificateError& e) {
    result["decomposition"] = nullptr;
    result["best_residual"] = residual_json(e.best_residual());
    text += "inconclusive: best residual " + sig3(e.best_residual()) + " above " + sig3(co.tol) + "\n";
    out.report["result"] = std::move(result);
    out.text = std::move(text);
    detail::finish(out, "inconclusive", exit_inconclusive, t0, ctx);
  }
  return out;
}

// -- power -----------------------------------------------------------------------

struct PowerOptions {
  int kmax = 8;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

inline Output cmd_power(const std::string& path, const json& doc, const PowerOptions& opt, const Context& ctx) {
  const auto t0 = detail::Clock::now();
  const Tolerances tol = ctx.tolerances();
  const Channel phi = channel_from_json(doc, tol);
  Rng rng(opt.seed);
  ConstructOptions co;
  co.tol = opt.tol * ctx.scale();
  const PowerSearchResult res = find_mixed_unitary_power(phi, opt.kmax, co, rng, tol);

  Output out;
  out.report = detail::header("power", ctx);
  out.report["input"] = detail::input_json(path, doc);
  out.report["options"] = json{{"kmax", opt.kmax}, {"tol", opt.tol}, {"seed", opt.seed}};
  json steps = json::array();
  std::string text;
  for (const auto& s : res.steps) {
    steps.push_back(json{{"k", s.k},
                         {"outcome", s.outcome},
                         {"min_eigenvalue", s.min_eigenvalue},
                         {"blocks", blocks_json(s.blocks)},
                         {"residual", residual_json(s.residual)}});
    text += "k = " + std::to_string(s.k) + ": " + s.outcome + ", fixed algebra " + detail::blocks_text(s.blocks) +
            ", ball min eigenvalue " + detail::num(s.min_eigenvalue) + "\n";
  }
  json result{{"k", res.k ? json(*res.k) : json(nullptr)}, {"steps", std::move(steps)}};
  if (res.k) {
    result["algebra"] = algebra_to_json(*res.algebra);
    result["certificate"] = detail::certificate_json(*res.certificate);
    result["decomposition"] = decomposition_to_json(*res.decomposition);
    text += "Phi^" + std::to_string(*res.k) + " is mixed unitary: " + std::to_string(res.decomposition->size()) +
            " unitaries, residual " + sig3(res.decomposition->residual) + "\n";
  } else {
    result["algebra"] = nullptr;
    result["certificate"] = nullptr;
    result["decomposition"] = nullptr;
    text += "no power k <= " + std::to_string(opt.kmax) + " certified\n";
  }
  out.report["result"] = std::move(result);
  out.text = std::move(text);
  if (res.k) {
    detail::finish(out, "certified", exit_ok, t0, ctx);
  } else {
    detail::finish(out, "inconclusive", exit_inconclusive, t0, ctx);
  }
  return out;
}

// -- corr ------------------------------------------------------------------------

struct CorrOptions {
  std::string mode = "quadrature";  // quadrature | rank | z2
  std::optional<double> tol;         // per-mode default when absent
  std::optional<std::uint64_t> seed;  // required by rank mode
};

inline Output cmd_corr(const std::string& path, const json& doc, const CorrOptions& opt, const Context& ctx) {
  const auto t0 = detail::Clock::now();
  const Tolerances tolset = ctx.tolerances();
  Output out;
  out.report = detail::header("corr", ctx);
  out.report["input"] = detail::input_json(path, doc);
  json options{{"mode", opt.mode}};
  json result;
  std::string text;
  std::string status = "certified";
  int code = exit_ok;

  if (opt.mode == "quadrature") {
    const CorrelationMatrix c = correlation_from_json(doc, tolset);
    const double tol = opt.tol.value_or(1e-12) * ctx.scale();
    options["tol"] = tol;
    const auto set = quadrature_decompose(c);
    result = json{{"p_num", 1}, {"p_den", c.dim()}, {"p", 1.0 / static_cast<double>(c.dim())}, {"rank", c.rank()}};
    result["target"] = matrix_to_json(set.target);
    result["decomposition"] = atom_set_to_json(set);
    text = "quadrature: (C + " + std::to_string(c.dim() - 1) + " I)/" + std::to_string(c.dim()) + " from " +
           std::to_string(set.atoms.size()) + " atoms, residual " + sig3(set.residual) + "\n";
    if (set.residual > tol) {
      status = "inconclusive";
      code = exit_inconclusive;
    }
  } else if (opt.mode == "rank") {
    if (!opt.seed) fail(ErrorKind::parse, "--seed is required for --mode rank");
    const CorrelationMatrix c = correlation_from_json(doc, tolset);
    MvOptions mv;
    mv.tol = opt.tol.value_or(1e-6) * ctx.scale();
    options["tol"] = mv.tol;
    options["seed"] = *opt.seed;
    Rng rng(*opt.seed);
    result = json{{"p_num", 1}, {"p_den", c.rank()}, {"p", 1.0 / static_cast<double>(c.rank())}, {"rank", c.rank()}};
    try {
      const auto mix = rank_r_mix(c, mv, rng, tolset);
      result["eigenvalue_margin"] = std::isfinite(mix.eigenvalue_margin) ? json(mix.eigenvalue_margin) : json(nullptr);
      result["target"] = matrix_to_json(mix.atoms.target);
      result["decomposition"] = atom_set_to_json(mix.atoms);
      text = "rank " + std::to_string(mix.rank) + ": (C + " + std::to_string(mix.rank - 1) + " I)/" +
             std::to_string(mix.rank) + " from " + std::to_string(mix.atoms.atoms.size()) + " atoms, residual " +
             sig3(mix.atoms.residual) + "\n";
    } catch (const NoCertificateError& e) {
      result["eigenvalue_margin"] = nullptr;
      result["target"] = nullptr;
      result["decomposition"] = nullptr;
      result["best_residual"] = residual_json(e.best_residual());
      text = "inconclusive: best residual " + sig3(e.best_residual()) + "\n";
      status = "inconclusive";
      code = exit_inconclusive;
    }
  } else if (opt.mode == "z2") {
    const CorrelationMatrix c = correlation_from_json(doc, tolset);
    const double tol = opt.tol.value_or(1e-8) * ctx.scale();
    options["tol"] = tol;
    const Z2Membership m = z2_membership(c.mat(), tol);
    const RVec f = induced_function(m, c.dim());
    const bool pd = walsh_pd_check(f, 1e-9 * ctx.scale());
    json atoms = json::array();
    for (const auto& s : m.atoms) atoms.push_back(std::vector<int>(s.data(), s.data() + s.size()));
    result = json{{"member", m.member},
                  {"residual", residual_json(m.residual)},
                  {"sign_vectors", std::move(atoms)},
                  {"weights", m.weights},
                  {"walsh_positive_definite", pd}};
    text = std::string(m.member ? "member" : "not a member") + " of the sign-vector hull: " +
           std::to_string(m.atoms.size()) + " atoms, residual " + sig3(m.residual) + ", Walsh check " +
           (pd ? "positive" : "negative") + "\n";
    status = m.member ? "member" : "not_member";
  } else {
    fail(ErrorKind::parse, "unknown --mode \"" + opt.mode + "\" (quadrature, rank or z2)");
  }
  out.report["options"] = std::move(options);
  out.report["result"] = std::move(result);
  out.text = std::move(text);
  detail::finish(out, status, code, t0, ctx);
  return out;
}

// -- selftest --------------------------------------------------------------------

struct PropertyOutcome {
  double measured = 0.0;
  double bound = 0.0;
  bool passed() const { return measured <= bound; }
};

struct Property {
  std::string name;
  std::function<PropertyOutcome(Rng&, double)> run;  // (rng, tolerance scale)
};

inline std::vector<Property> selftest_properties(bool full) {
  std::vector<Property> props;
  const Index mc = full ? 100000 : 20000;

  props.push_back({"clifford_projector_moment", [](Rng&, double s) {
                     const auto c = clifford_group_1q();
                     const double err = (projector_moment(c, uniform_weights(c.size())) - projector_moment_haar(2)).norm();
                     return PropertyOutcome{err, 1e-12 * s};
                   }});
  props.push_back({"clifford_adjoint_moment", [](Rng&, double s) {
                     const auto c = clifford_group_1q();
                     const double err = (adjoint_moment(c, uniform_weights(c.size())) - adjoint_moment_haar(2)).norm();
                     return PropertyOutcome{err, 1e-12 * s};
                   }});
  props.push_back({"haar_projector_moment", [](Rng& rng, double s) {
                     const auto u = haar_sample(3, 20000, rng);
                     const double err = (projector_moment(u, uniform_weights(u.size())) - projector_moment_haar(3)).norm();
                     return PropertyOutcome{err, 5e-2 * s};
                   }});
  props.push_back({"haar_adjoint_moment", [](Rng& rng, double s) {
                     const auto u = haar_sample(3, 20000, rng);
                     const double err = (adjoint_moment(u, uniform_weights(u.size())) - adjoint_moment_haar(3)).norm();
                     return PropertyOutcome{err, 5e-2 * s};
                   }});
  props.push_back({"trace_square_integral", [full](Rng& rng, double s) {
                     // Worst deviation in standard errors over a few random X.
                     double worst = 0.0;
                     for (Index d = 2; d <= 4; ++d) {
                       for (int t = 0; t < (full ? 5 : 2); ++t) {
                         const CMat x = ginibre(d, d, rng);
                         const auto est = trace_square_estimate(x, 4000, rng);
                         const double exact = (x.adjoint() * x).trace().real() / static_cast<double>(d);
                         worst = std::max(worst, std::abs(est.mean - exact) / est.std_error);
                       }
                     }
                     return PropertyOutcome{worst, 4.0 * s};
                   }});
  props.push_back({"L_identity_exact", [](Rng& rng, double s) {
                     const auto a = AlgebraStructure::from_blocks({{1, 2}, {1, 3}});
                     const Channel phi = random_channel_fixing(a, 3, rng);
                     CMat lhs = L_closed_form(phi, a);
                     for (std::size_t k = 0; k < a.blocks().size(); ++k) {
                       const double n = static_cast<double>(a.blocks()[k].n);
                       lhs -= L_hat_closed_form(phi, a, k) / (n * n);
                     }
                     const double c = static_cast<double>(a.D() - a.r_hat() - 1);
                     const CMat rhs = phi.transfer() + c * condexp_channel(a).transfer();
                     return PropertyOutcome{(lhs - rhs).norm(), 1e-9 * s};
                   }});
  props.push_back({"L_closed_form_vs_monte_carlo", [mc](Rng& rng, double s) {
                     const auto a = AlgebraStructure::from_blocks({{1, 2}, {1, 3}});
                     const Channel phi = random_channel_fixing(a, 3, rng);
                     const CMat closed = L_closed_form(phi, a);
                     const CMat est = L_monte_carlo(phi.kraus(), a, mc, rng);
                     return PropertyOutcome{(closed - est).norm() / closed.norm(), 5e-2 * s};
                   }});
  props.push_back({"cp_step_blocks", [full](Rng& rng, double s) {
                     double worst = 0.0;
                     for (Index n = 2; n <= 4; ++n) {
                       for (int t = 0; t < (full ? 10 : 3); ++t) {
                         const Channel phi = random_unital_channel(n, 3, rng);
                         const CMat m = depolarizing(n).choi().mat - phi.choi().mat / static_cast<double>(n * n);
                         worst = std::max(worst, -min_eigenvalue(m));
                       }
                     }
                     return PropertyOutcome{std::max(0.0, worst), 1e-9 * s};
                   }});
  props.push_back({"watrous_base_case", [full](Rng& rng, double s) {
                     double worst = 0.0;
                     const auto a = AlgebraStructure::scalars(3);
                     for (int t = 0; t < (full ? 3 : 1); ++t) {
                       const Channel phi = random_unital_channel(3, 3, rng);
                       const auto target = general_mix(phi, a).first;
                       ConstructOptions co;
                       co.tol = 1e-6 * s;
                       try {
                         worst = std::max(worst, construct_mixed_unitary(target, a, co, rng).residual);
                       } catch (const NoCertificateError& e) {
                         worst = std::max(worst, e.best_residual());
                       }
                     }
                     return PropertyOutcome{worst, 1e-6 * s};
                   }});
  return props;
}

struct SelftestOptions {
  std::string level = "quick";
  std::uint64_t seed = 0;
};

inline Output cmd_selftest(const SelftestOptions& opt, const Context& ctx) {
  const auto t0 = detail::Clock::now();
  if (opt.level != "quick" && opt.level != "full") fail(ErrorKind::parse, "--level must be quick or full");
  Output out;
  out.report = detail::header("selftest", ctx);
  out.report["input"] = nullptr;
  out.report["options"] = json{{"level", opt.level}, {"seed", opt.seed}};
  json rows = json::array();
  std::string text;
  std::vector<std::string> failed;
  Rng rng(opt.seed);
  for (const auto& p : selftest_properties(opt.level == "full")) {
    const auto ts = detail::Clock::now();
    PropertyOutcome r;
    std::string error;
    try {
      r = p.run(rng, ctx.scale());
    } catch (const Error& e) {
      r = {std::numeric_limits<double>::infinity(), 0.0};
      error = e.what();
    }
    const bool ok = error.empty() && r.passed();
    if (!ok) failed.push_back(p.name);
    json row{{"name", p.name},
             {"passed", ok},
             {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
             {"bound", r.bound}};
    if (!error.empty()) row["error"] = error;
    if (ctx.timing) row["seconds"] = detail::seconds_since(ts);
    rows.push_back(std::move(row));
    char line[160];
    std::snprintf(line, sizeof line, "%-4s  %-30s  measured %-10s  bound %s\n", ok ? "PASS" : "FAIL", p.name.c_str(),
                  sig3(r.measured).c_str(), sig3(r.bound).c_str());
    text += line;
  }
  text += failed.empty() ? "all properties passed\n" : std::to_string(failed.size()) + " properties failed\n";
  out.report["result"] = json{{"properties", std::move(rows)}, {"failed", failed}};
  out.text = std::move(text);
  detail::finish(out, failed.empty() ? "passed" : "failed", failed.empty() ? exit_ok : exit_numerical, t0, ctx);
  return out;
}

}  // namespace muwork::cli
