#pragma once

// Command implementations behind the `cartan` tool. Each returns a JSON report
// with stable field names, a short human-readable rendering and an exit status.
// Malformed input surfaces as cartan::Error; the caller maps it to status 2.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/domains.hpp"
#include "cartan/hereditary.hpp"
#include "cartan/json_io.hpp"
#include "cartan/lifting.hpp"
#include "cartan/linalg.hpp"
#include "cartan/verifier.hpp"

namespace cartan {

inline constexpr double kCliTol = 1e-8;

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kDisagreement = 3;
}  // namespace exit_code

struct CommandResult {
  Json report;
  std::string text;
  int exit_status = exit_code::kPass;
};

namespace detail {

inline Json envelope(const std::string& command, std::optional<std::uint64_t> seed, double tol) {
  Json j;
  j["command"] = command;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["tolerances"] = {{"tol", tol}};
  j["results"] = Json::array();
  j["summary"] = Json::object();
  return j;
}

inline CommandResult finish(Json report, std::string text, int status) {
  report["exit_status"] = status;
  return {std::move(report), std::move(text), status};
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CommandResult cmd_sample(const DomainDescriptor& d, std::size_t count, std::uint64_t seed,
                                std::optional<double> off_shilov_scale, double tol = kCliTol) {
  auto report = detail::envelope("sample", seed, tol);
  report["descriptor"] = d.to_string();
  if (off_shilov_scale) report["off_shilov_scale"] = *off_shilov_scale;
  std::ostringstream text;
  auto points = sample_shilov(d, count, seed);
  std::size_t on = 0;
  for (auto& z : points) {
    if (off_shilov_scale) z = perturb_off_shilov(d, z, *off_shilov_scale);
    const double defect = shilov_defect(d, z);
    const bool ok = defect <= tol;
    on += ok;
    report["results"].push_back({{"point", vector_to_json(z)}, {"on_shilov", ok}, {"shilov_defect", defect}});
    for (std::size_t i = 0; i < z.size(); ++i) text << (i ? " " : "") << z[i].real() << (z[i].imag() < 0 ? "" : "+") << z[i].imag() << "i";
    text << "  [" << (ok ? "on" : "off") << " Shilov, defect " << detail::fmt(defect) << "]\n";
  }
  report["summary"] = {{"count", count}, {"on_shilov", on}};
  return detail::finish(std::move(report), text.str(), exit_code::kPass);
}

// ---------------------------------------------------------------------------

enum class ClassifyMode { Spectral, Identities, Both };

inline CommandResult cmd_classify(const TupleFile& input, double tol = kCliTol, ClassifyMode mode = ClassifyMode::Both) {
  const auto& d = input.descriptor;
  const auto& s = input.matrices;
  auto report = detail::envelope("classify", std::nullopt, tol);
  report["descriptor"] = d.to_string();
  report["mode"] = mode == ClassifyMode::Spectral ? "spectral" : mode == ClassifyMode::Identities ? "identities" : "both";
  std::ostringstream text;

  const bool commuting = check_commuting(s, tol);
  const bool normal = check_normal(s, tol);
  report["summary"]["commuting"] = commuting;
  report["summary"]["normal"] = normal;
  text << d.to_string() << ": " << s.front().rows() << "x" << s.front().rows() << " tuple, "
       << (commuting ? "commuting" : "NOT commuting") << ", " << (normal ? "normal" : "not normal") << "\n";

  std::optional<bool> spectral, identity;
  if (mode != ClassifyMode::Identities) {
    Json r = {{"classifier", "spectral"}};
    if (!commuting || !normal) {
      r["error"] = to_string(commuting ? ErrorKind::NotNormal : ErrorKind::NotCommuting);
      r["pass"] = false;
      text << "spectral: not applicable (" << r["error"].get<std::string>() << ")\n";
    } else {
      const auto sp = classify_spectral(s, d, tol);
      spectral = sp.pass;
      Json pts = Json::array();
      for (std::size_t k = 0; k < sp.spectrum.points.size(); ++k)
        pts.push_back({{"point", vector_to_json(sp.spectrum.points[k])}, {"multiplicity", sp.spectrum.multiplicities[k]}});
      r["pass"] = sp.pass;
      r["max_shilov_defect"] = sp.max_defect;
      r["spectrum"] = std::move(pts);
      text << "spectral: " << (sp.pass ? "PASS" : "FAIL") << " (max Shilov defect " << detail::fmt(sp.max_defect)
           << " over " << sp.spectrum.points.size() << " joint eigenvalues)\n";
    }
    report["results"].push_back(std::move(r));
  }
  if (mode != ClassifyMode::Spectral) {
    Json r = {{"classifier", "identities"}};
    if (!commuting) {
      r["error"] = to_string(ErrorKind::NotCommuting);
      r["pass"] = false;
      text << "identities: not applicable (NotCommuting)\n";
    } else {
      const auto ir = classify_identities(s, d, tol);
      identity = ir.identity_pass;
      Json rs = Json::array();
      for (const auto& x : ir.identity_residuals) rs.push_back({{"label", x.label}, {"residual", x.residual}});
      r["pass"] = ir.identity_pass;
      r["max_residual"] = ir.max_identity_residual;
      r["residuals"] = std::move(rs);
      text << "identities: " << (ir.identity_pass ? "PASS" : "FAIL") << " (max residual "
           << detail::fmt(ir.max_identity_residual) << " over " << ir.identity_residuals.size() << " constraints)\n";
    }
    report["results"].push_back(std::move(r));
  }

  int status;
  if (spectral && identity && *spectral != *identity) {
    report["summary"]["agreement"] = false;
    text << "classifiers DISAGREE\n";
    status = exit_code::kDisagreement;
  } else {
    if (spectral && identity) {
      report["summary"]["agreement"] = true;
      text << "classifiers agree\n";
    }
    bool pass = true;
    for (const auto& r : report["results"]) pass = pass && r["pass"].get<bool>();
    report["summary"]["pass"] = pass;
    status = pass ? exit_code::kPass : exit_code::kFail;
  }
  return detail::finish(std::move(report), text.str(), status);
}

// ---------------------------------------------------------------------------

inline Json equivalence_to_json(const EquivalenceReport& rep) {
  Json trials = Json::array();
  for (const auto& t : rep.trials)
    trials.push_back({{"index", t.index},
                      {"seed", t.seed},
                      {"atoms", t.atoms},
                      {"truth", t.truth},
                      {"spectral", t.spectral},
                      {"identities", t.identity},
                      {"whole_tuple_identities", t.whole_identity},
                      {"spectral_defect", t.spectral_defect},
                      {"max_residual", t.max_residual},
                      {"marginal", t.marginal}});
  return trials;
}

inline CommandResult cmd_equiv(const DomainDescriptor& d, std::size_t trials, std::uint64_t seed, double tol = kCliTol) {
  const auto rep = verify_equivalence(d, trials, seed, tol);
  auto report = detail::envelope("equiv", seed, tol);
  report["descriptor"] = d.to_string();
  report["results"] = equivalence_to_json(rep);
  std::size_t positives = 0;
  for (const auto& t : rep.trials) positives += t.truth;
  report["summary"] = {{"trials", trials},
                       {"boundary_trials", positives},
                       {"disagreements", rep.disagreements},
                       {"marginal_disagreements", rep.marginal_disagreements},
                       {"truth_mismatches", rep.truth_mismatches},
                       {"route_mismatches", rep.route_mismatches}};
  std::ostringstream text;
  text << d.to_string() << ": " << trials << " trials (" << positives << " on the boundary), " << rep.disagreements
       << " disagreements, " << rep.marginal_disagreements << " marginal, " << rep.truth_mismatches
       << " label mismatches, " << rep.route_mismatches << " product-route mismatches\n";
  return detail::finish(std::move(report), text.str(), rep.disagreements == 0 ? exit_code::kPass : exit_code::kFail);
}

// ---------------------------------------------------------------------------

inline CommandResult cmd_canonical(const ComplexMatrix& z, double tol = kCliTol) {
  const auto y = youla_canonical(z, tol);
  auto report = detail::envelope("canonical", std::nullopt, tol);
  const auto recon = y.u.adjoint() * y.canonical * y.u.conjugate();
  const double recon_residual = (recon - z).frobenius_norm();
  report["results"].push_back({{"sigmas", y.sigmas},
                               {"u", matrix_to_json(y.u)},
                               {"canonical", matrix_to_json(y.canonical)},
                               {"residual", y.residual},
                               {"reconstruction_residual", recon_residual}});
  report["summary"] = {{"size", z.rows()}, {"blocks", y.sigmas.size()}, {"residual", y.residual}};
  std::ostringstream text;
  text << "sigmas:";
  for (double s : y.sigmas) text << " " << s;
  text << "\nresidual ||U Z U^t - K|| = " << detail::fmt(y.residual) << ", reconstruction residual "
       << detail::fmt(recon_residual) << "\n";
  return detail::finish(std::move(report), text.str(), exit_code::kPass);
}

// ---------------------------------------------------------------------------

inline CommandResult cmd_lift(const ModelSpec& spec_s, const ModelSpec& spec_t, std::uint64_t seed, double tol = kCliTol,
                              ExtensionMode mode = ExtensionMode::ReducingSpan) {
  if (!(spec_s.descriptor == spec_t.descriptor))
    throw Error(ErrorKind::ArityMismatch, "models over different domains: " + spec_s.descriptor.to_string() + " vs " +
                                              spec_t.descriptor.to_string());
  const auto ms = spec_s.build();
  const auto mt = spec_t.build();
  const auto basis = intertwiner_space(ms.s, mt.s);

  auto report = detail::envelope("lift", seed, tol);
  report["descriptor"] = spec_s.descriptor.to_string();
  report["extension"] = mode == ExtensionMode::Ambient ? "ambient" : "reducing_span";
  std::ostringstream text;
  text << "intertwiner space dimension " << basis.size() << " (H: " << ms.h_basis.cols() << ", J: " << mt.h_basis.cols()
       << ")\n";

  std::size_t lifted = 0, dominated = 0, preserved = 0, no_lift = 0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const auto& x = basis[b];
    Json item = {{"index", b}, {"x", matrix_to_json(x)}};
    const auto dom = semispectral_domination(x, ms, mt, tol);
    dominated += dom.pass;
    item["domination"] = {{"pass", dom.pass}, {"min_eigenvalue", dom.min_eigenvalue}, {"points", dom.points_checked}};
    try {
      const auto r = lift(x, ms, mt, tol, mode);
      const auto& dg = r.diagnostics;
      const auto pres = preservation_checks(x, r.cyclic_lift, tol);
      const bool ok = dg.norm_gap <= 1e-8 * std::max(1.0, dg.norm_x) && dg.restriction_residual <= 1e-10;
      lifted += ok;
      preserved += pres.holds();
      auto imp = [](const Implication& i) { return Json{{"hypothesis", i.hypothesis}, {"conclusion", i.conclusion}}; };
      item["lift"] = {{"existence_residual", dg.existence_residual},
                      {"sylvester_residual", dg.sylvester_residual},
                      {"restriction_residual", dg.restriction_residual},
                      {"solution_dimension", dg.solution_dimension},
                      {"norm_x", dg.norm_x},
                      {"norm_lift", dg.norm_lift},
                      {"norm_gap", dg.norm_gap},
                      {"extension_dims", {dg.extension_dim_s, dg.extension_dim_t}},
                      {"cyclic_dims", {dg.cyclic_dim_s, dg.cyclic_dim_t}},
                      {"ok", ok}};
      item["preservation"] = {{"isometric", imp(pres.isometric)},
                              {"surjective", imp(pres.surjective)},
                              {"bijective", imp(pres.bijective)},
                              {"holds", pres.holds()}};
      text << "  X" << b << ": domination " << (dom.pass ? "ok" : "FAIL") << ", norm gap " << detail::fmt(dg.norm_gap)
           << ", restriction " << detail::fmt(dg.restriction_residual) << ", solution dim " << dg.solution_dimension
           << ", preservation " << (pres.holds() ? "ok" : "FAIL") << "\n";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoLiftExists) throw;
      ++no_lift;
      item["lift"] = {{"error", to_string(e.kind())}, {"message", e.what()}};
      text << "  X" << b << ": no lift (" << e.what() << ")\n";
    }
    report["results"].push_back(std::move(item));
  }
  report["summary"] = {{"intertwiner_dimension", basis.size()},
                       {"dominations_pass", dominated},
                       {"lifts_ok", lifted},
                       {"no_lift", no_lift},
                       {"preservation_ok", preserved}};
  const bool all = dominated == basis.size() && lifted == basis.size() && preserved == basis.size();
  return detail::finish(std::move(report), text.str(), all ? exit_code::kPass : exit_code::kFail);
}

// ---------------------------------------------------------------------------

inline std::string factor_summary(const Factor& f) {
  switch (f.type) {
    case FactorType::I:
      if (f.p == 1) return "ball boundary: S is a spherical isometry, sum_k S_k* S_k = I";
      return "rectangular matrices: sum_k S_{j,k}* S_{i,k} = delta_ij I for i <= j";
    case FactorType::II: return "symmetric matrices: the row identities with S_{j,i} := S_{i,j}";
    case FactorType::III:
      if (f.p % 2 == 0) return "antisymmetric matrices, even size: the row identities with S_{j,i} := -S_{i,j}";
      return "antisymmetric matrices, odd size: q_m(S, S*) = (-1)^(m-1) C(" + std::to_string(f.p - 1) +
             ", m-1) I, where det(lambda - W^t Z) = sum_m q_m(Z, W) lambda^m";
    case FactorType::IV:
      if (f.p == 1) return "circle: S is an isometry";
      return "Lie sphere: S is a spherical isometry and every S_i* S_j is self-adjoint";
  }
  return "";
}

inline CommandResult cmd_explain(const DomainDescriptor& d) {
  auto report = detail::envelope("explain", std::nullopt, 0.0);
  report.erase("tolerances");
  report["descriptor"] = d.to_string();
  std::ostringstream text;
  text << d.to_string() << " (dimension " << d.dimension() << ")\n";
  if (d.factor_count() > 1) text << "product: S is a boundary isometry iff each factor block is\n";
  std::size_t total = 0;
  for (std::size_t k = 0; k < d.factor_count(); ++k) {
    const auto& f = d.factors()[k];
    const auto set = factor_identity_set(f);
    const auto names = variable_names(f);
    const std::size_t off = d.offset(k);
    Json item = {{"factor", f.to_string()}, {"offset", off}, {"summary", factor_summary(f)}, {"constraints", Json::array()}};
    text << "\n" << f.to_string() << ", coordinates " << off + 1 << ".." << off + f.dimension() << ": "
         << factor_summary(f) << "\n";
    for (const auto& c : set.constraints) {
      const auto poly = c.poly.to_string(names);
      item["constraints"].push_back(
          {{"label", c.label}, {"polynomial", poly}, {"target", complex_to_json(c.target)}, {"terms", c.poly.terms().size()}});
      text << "  " << c.label << "\n    ";
      if (poly.size() > 400)
        text << "(" << c.poly.terms().size() << " terms)";
      else
        text << poly;
      text << " = " << detail::format_coefficient(c.target) << "\n";
    }
    total += set.constraints.size();
    report["results"].push_back(std::move(item));
  }
  text << "\nvariables: z(..) names a coordinate of the factor and w(..) its adjoint; "
          "z^a w^b evaluates to S*^b S^a\n";
  report["summary"] = {{"constraints", total}, {"factors", d.factor_count()}};
  return detail::finish(std::move(report), text.str(), exit_code::kPass);
}

}  // namespace cartan
