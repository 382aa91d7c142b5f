#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "covkit/error.hpp"
#include "covkit/naimark.hpp"
#include "covkit/solver.hpp"

namespace covkit::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string policy_name(SectionPolicy p) {
  return p == SectionPolicy::LexMin ? "lex_min" : "min_moved";
}

Json envelope(const std::string& command, const EffectiveOptions& opt) {
  Json j;
  j["schema"] = "covkit/1";
  j["command"] = command;
  j["options"] = {{"tol_unit", opt.tol.unit},
                  {"tol_lin", opt.tol.lin},
                  {"tol_psd", opt.tol.psd},
                  {"rank_cutoff", opt.tol.rank_cutoff},
                  {"character", opt.tol.character},
                  {"seed", opt.seed},
                  {"section_policy", policy_name(opt.policy)}};
  return j;
}

// ---------------------------------------------------------------------------
// Building library objects from document descriptors

GSpace build_space(const GroupPtr& g, const SpaceDesc& d, SectionPolicy pol) {
  switch (d.kind) {
    case SpaceDesc::Kind::Natural:
      return natural_action_space(g, pol);
    case SpaceDesc::Kind::ProductPower:
      return product_action_space(g, d.power, pol);
    case SpaceDesc::Kind::Regular:
      return regular_action_space(g, pol);
    case SpaceDesc::Kind::Singleton:
      return singleton_space(g);
    case SpaceDesc::Kind::Action: {
      if (static_cast<int>(d.rows.size()) != g->order)
        fail_validation("json: $.space.action: expected one row per group "
                        "element");
      std::vector<int> flat;
      for (const auto& row : d.rows) {
        if (row.size() != d.rows[0].size())
          fail_validation("json: $.space.action: ragged rows");
        flat.insert(flat.end(), row.begin(), row.end());
      }
      return make_gspace(g, std::move(flat), pol);
    }
  }
  fail_validation("unreachable space kind");
}

Representation build_rep(const GroupPtr& g, const RepDesc& d) {
  switch (d.kind) {
    case RepDesc::Kind::Permutation:
      return permutation_rep(g);
    case RepDesc::Kind::Regular:
      return regular_rep(g);
    case RepDesc::Kind::Matrices:
      return matrix_rep(g, d.matrices, d.multiplier);
  }
  fail_validation("unreachable representation kind");
}

SystemPtr build_system(const Document& doc, const EffectiveOptions& opt,
                       bool require_space = true) {
  if (!doc.group) fail_validation("json: $.group: required by this command");
  if (!doc.rep)
    fail_validation("json: $.representation: required by this command");
  if (!doc.space) {
    if (require_space)
      fail_validation("json: $.space: required by this command");
    return channel_system(build_rep(doc.group, *doc.rep), opt.tol, opt.seed);
  }
  return make_system(build_space(doc.group, *doc.space, opt.policy),
                     build_rep(doc.group, *doc.rep), opt.tol, opt.seed);
}

CovariantPOVM build_doc_povm(const Document& doc, const SystemPtr& sys) {
  if (doc.payload != Document::Payload::Seeds)
    fail_validation("json: $.payload: expected a seeds payload");
  return build_from_seeds(sys, doc.seeds);
}

IntertwinerSet build_doc_set(const Document& doc, const SystemPtr& sys) {
  if (doc.payload != Document::Payload::Intertwiners)
    fail_validation("json: $.payload: expected an intertwiners payload");
  if (!doc.out_rep)
    fail_validation(
        "json: $.output_representation: required by instrument commands");
  IntertwinerSet s;
  s.system = sys;
  s.v = build_rep(doc.group, *doc.out_rep);
  for (const auto& rb : doc.blocks) {
    IntertwinerBlock b;
    b.orbit = rb.orbit;
    b.cls = rb.cls;
    b.ops = rb.copies;
    s.blocks.push_back(std::move(b));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Report fragments

Json classification_to_json(const ObsClassification& c) {
  Json j;
  j["verdicts"] = {{"rank1", c.is_rank1},
                   {"pvm", c.is_pvm},
                   {"norm1", c.is_norm1},
                   {"informationally_complete", c.is_informationally_complete},
                   {"extreme_covariant", c.is_extreme_covariant},
                   {"extreme_global", c.is_extreme_global}};
  j["defects"] = {{"normalization", c.normalization_defect},
                  {"covariance", c.covariance_defect},
                  {"pvm", c.pvm_defect},
                  {"norm1", c.norm1_defect},
                  {"psd_margin", c.psd_margin}};
  j["spectra"] = {{"ic_singulars", real_vector_to_json(c.ic_singulars)},
                  {"extreme_covariant_singulars",
                   real_vector_to_json(c.extreme_covariant_singulars)},
                  {"extreme_global_singulars",
                   real_vector_to_json(c.extreme_global_singulars)}};
  j["effect_ranks"] = c.effect_ranks;
  j["ic_span_dim"] = c.ic_span_dim;
  Json zo = Json::array();
  for (bool z : c.zero_orbit) zo.push_back(z);
  j["zero_orbit"] = zo;
  if (!c.perturbation.empty()) {
    Json w = Json::array();
    for (const Matrix& m : c.perturbation) w.push_back(matrix_to_json(m));
    j["witnesses"] = {{"perturbation", std::move(w)}};
  }
  return j;
}

Json intertwiner_report_to_json(const IntertwinerReport& r) {
  Json j;
  j["verdicts"] = {{"minimal", r.minimal}, {"normalized", r.normalized}};
  j["defects"] = {{"intertwining", r.intertwining_defect},
                  {"normalization", r.normalization_defect}};
  Json spectra = Json::array();
  for (const auto& s : r.gram_spectra)
    spectra.push_back(real_vector_to_json(s));
  j["spectra"] = {{"gram", std::move(spectra)}};
  return j;
}

Json extremality_to_json(const InstrExtremality& e) {
  Json j;
  j["verdicts"] = {{"extreme", e.extreme}};
  j["spectra"] = {{"products", real_vector_to_json(e.singular_values)}};
  if (!e.witness.empty()) {
    Json w = Json::array();
    for (const Matrix& m : e.witness) w.push_back(matrix_to_json(m));
    j["witnesses"] = {{"multiplicity", std::move(w)}};
  }
  return j;
}

// Per-orbit table of the complete stabilizer dual; this is the indexing the
// intertwiner payload's (orbit, cls) fields refer to. The multiplicity is
// that of the class inside U restricted to the stabilizer.
Json class_table(const SystemPtr& sys) {
  Json orbits = Json::array();
  for (int o = 0; o < sys->num_orbits(); ++o) {
    Json entry = {{"orbit", o},
                  {"stabilizer_order", sys->stabilizer_order(o)}};
    if (sys->stabilizer_order(o) > SystemContext::kCompleteDualOrderLimit) {
      entry["classes_omitted"] = "stabilizer order exceeds the dual guard";
      orbits.push_back(std::move(entry));
      continue;
    }
    const auto& stab = sys->space().stabilizer[o];
    const auto& dual = sys->dual(o);
    Json classes = Json::array();
    for (std::size_t c = 0; c < dual.size(); ++c) {
      Complex mult = 0;
      for (std::size_t h = 0; h < stab.size(); ++h)
        mult += std::conj(dual[c].character(static_cast<Eigen::Index>(h))) *
                sys->rep()(stab[h]).trace();
      mult /= double(stab.size());
      Json ch = Json::array();
      for (Eigen::Index i = 0; i < dual[c].character.size(); ++i)
        ch.push_back(complex_to_json(dual[c].character(i)));
      classes.push_back({{"cls", static_cast<int>(c)},
                         {"dim", dual[c].dim},
                         {"multiplicity",
                          static_cast<int>(std::lround(mult.real()))},
                         {"character", std::move(ch)}});
    }
    entry["classes"] = std::move(classes);
    orbits.push_back(std::move(entry));
  }
  return orbits;
}

Json seeds_to_json(const std::vector<Seed>& seeds) {
  Json arr = Json::array();
  for (const Seed& s : seeds)
    arr.push_back({{"orbit", s.orbit}, {"k", matrix_to_json(s.k)}});
  return arr;
}

}  // namespace

// ---------------------------------------------------------------------------

Json run_classify(const Document& doc, const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("classify", opt);
  auto sys = build_system(doc, opt);
  CovariantPOVM raw = build_doc_povm(doc, sys);
  NormalizationResult nr = normalize(raw);
  rep["normalization"] = {{"input_defect", raw.normalization_defect()},
                          {"full_rank", nr.full_rank},
                          {"output_defect", nr.defect}};
  rep["classification"] = classification_to_json(classify(nr.povm));
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

Json run_normalize(const Document& doc, const Json& original,
                   const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("normalize", opt);
  auto sys = build_system(doc, opt);
  CovariantPOVM raw = build_doc_povm(doc, sys);
  NormalizationResult nr = normalize(raw);
  rep["normalization"] = {{"input_defect", raw.normalization_defect()},
                          {"full_rank", nr.full_rank},
                          {"output_defect", nr.defect},
                          {"k", matrix_to_json(nr.k)},
                          {"inv_sqrt", matrix_to_json(nr.inv_sqrt)}};
  // A ready-to-use document with the normalized seeds in place.
  Json out_doc = original;
  out_doc["payload"] = {{"kind", "seeds"},
                        {"seeds", seeds_to_json(nr.povm.seeds)}};
  rep["document"] = std::move(out_doc);
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

Json run_solve(const Document& doc, const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("solve", opt);
  auto sys = build_system(doc, opt);
  SolverResult sr = solve_covariant(sys);
  rep["solution"] = {{"linear_dim", sr.linear_dim},
                     {"affine_dim", sr.affine_dim},
                     {"projector_spectrum",
                      real_vector_to_json(sr.projector_spectrum)}};
  // The affine basis, decoded to one family of matrices per direction.
  Json basis = Json::array();
  for (int a = 0; a < sr.affine_dim; ++a) {
    Json family = Json::array();
    for (const Matrix& m : sr.decode(sr.affine_basis.col(a)))
      family.push_back(matrix_to_json(m));
    basis.push_back(std::move(family));
  }
  rep["solution"]["affine_basis"] = std::move(basis);
  Json part = Json::array();
  for (const Matrix& m : sr.decode(sr.particular))
    part.push_back(matrix_to_json(m));
  rep["solution"]["particular"] = std::move(part);
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

Json run_dilate(const Document& doc, const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("dilate", opt);
  auto sys = build_system(doc, opt);
  CovariantPOVM p = build_doc_povm(doc, sys);
  RefinedPOVM refined = refine(p);
  NaimarkBundle bundle = dilate(refined);

  Json labels = Json::array();
  for (const auto& [orbit, element] : bundle.labels)
    labels.push_back({{"orbit", orbit}, {"element", element}});
  rep["refinement"] = {{"coset_defect", refined.coset_defect},
                       {"post_processing_defect",
                        refined.post_processing_defect},
                       {"zero_orbit", refined.zero_orbit}};
  rep["bundle"] = {{"dim", bundle.dim},
                   {"labels", std::move(labels)},
                   {"j", matrix_to_json(bundle.j)}};
  rep["defects"] = {{"reproduction", bundle.reproduction_defect},
                    {"gram", bundle.gram_defect},
                    {"isometry", bundle.isometry_defect},
                    {"intertwining", bundle.intertwining_defect},
                    {"v_law", bundle.v_law_defect},
                    {"q_covariance", bundle.q_covariance_defect}};
  rep["verdicts"] = {{"minimal", bundle.minimal},
                     {"projective", bundle.v.projective()}};
  // V itself, unless the matrices would dominate the report.
  const long long entries = static_cast<long long>(bundle.v.matrices.size()) *
                            bundle.dim * bundle.dim;
  if (entries <= 200000) {
    Json v = Json::array();
    for (const Matrix& m : bundle.v.matrices) v.push_back(matrix_to_json(m));
    rep["bundle"]["v_matrices"] = std::move(v);
  } else {
    rep["bundle"]["v_matrices_omitted"] = "group order times dim^2 too large";
  }
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

Json run_instrument(const Document& doc, const std::string& sub,
                    const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("instrument " + sub, opt);
  auto sys = build_system(doc, opt);
  IntertwinerSet s = build_doc_set(doc, sys);

  if (sub == "validate") {
    rep["validation"] = intertwiner_report_to_json(validate_intertwiners(s));
    rep["classes"] = class_table(sys);
  } else if (sub == "build") {
    CovariantInstrument instr = build_instrument(s);
    rep["validation"] = intertwiner_report_to_json(validate_intertwiners(s));
    rep["instrument"] = {{"covariance_defect", instr.covariance_defect()}};
    Json kraus = Json::array();
    for (std::size_t x = 0; x < instr.kraus.size(); ++x) {
      Json ops = Json::array();
      for (const Matrix& k : instr.kraus[x]) ops.push_back(matrix_to_json(k));
      kraus.push_back({{"point", static_cast<int>(x)}, {"ops", std::move(ops)}});
    }
    rep["instrument"]["kraus"] = std::move(kraus);
    rep["instrument"]["measured_seeds"] = seeds_to_json(instr.povm().seeds);
  } else if (sub == "dilate") {
    IntertwinerReport v = validate_intertwiners(s);
    bool reduced = false;
    if (!v.minimal) {
      s = reduce_to_minimal(s);
      reduced = true;
      if (!validate_intertwiners(s).minimal)
        fail_numerical("instrument dilate: reduction did not reach a minimal "
                       "set");
    }
    DilationBundle b = minimal_dilation(s);
    rep["verdicts"] = {{"minimal", b.minimal}, {"reduced_input", reduced}};
    rep["defects"] = {{"isometry", b.isometry_defect},
                      {"stinespring", b.stinespring_defect},
                      {"intertwining", b.intertwining_defect},
                      {"imprimitivity", b.imprimitivity_defect}};
    rep["bundle"] = {{"dim", b.dim}, {"j", matrix_to_json(b.j)}};
  } else if (sub == "extreme") {
    IntertwinerReport v = validate_intertwiners(s);
    if (!v.normalized)
      fail_validation("instrument extreme: the set is not normalized; run "
                      "renormalization first");
    bool reduced = false;
    if (!v.minimal) {
      // Reduction preserves the instrument, so the verdict applies to the
      // input. Re-reduce and insist the verdict is stable.
      IntertwinerSet r1 = reduce_to_minimal(s);
      InstrExtremality e1 = extreme_in_covariance_structure(r1);
      InstrExtremality e2 =
          extreme_in_covariance_structure(reduce_to_minimal(r1));
      if (e1.extreme != e2.extreme)
        fail_numerical("instrument extreme: verdict unstable under repeated "
                       "reduction");
      s = std::move(r1);
      reduced = true;
      rep["extremality"] = extremality_to_json(e1);
    } else {
      rep["extremality"] =
          extremality_to_json(extreme_in_covariance_structure(s));
    }
    rep["extremality"]["verdicts"]["reduced_input"] = reduced;
  } else {
    fail_validation("unknown instrument subcommand \"" + sub + "\"");
  }
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

Json run_channel(const Document& doc, const std::string& sub,
                 const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("channel " + sub, opt);
  if (doc.space && doc.space->kind != SpaceDesc::Kind::Singleton)
    fail_validation("json: $.space: channel documents take the singleton "
                    "space (or omit it)");
  auto sys = build_system(doc, opt, /*require_space=*/false);
  IntertwinerSet s = build_doc_set(doc, sys);

  if (sub == "validate") {
    rep["validation"] = intertwiner_report_to_json(validate_intertwiners(s));
    rep["classes"] = class_table(sys);
  } else if (sub == "extreme") {
    ChannelReport cr = channel_extreme(s);
    rep["validation"] = intertwiner_report_to_json(cr.validation);
    rep["extremality"] = extremality_to_json(cr.extremality);
    rep["defects"] = {{"commutation", cr.commutation_defect}};
  } else {
    fail_validation("unknown channel subcommand \"" + sub + "\"");
  }
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

Json run_symfamily(int dim, double alpha, const std::vector<double>& grid,
                   const EffectiveOptions& opt) {
  const auto t0 = Clock::now();
  Json rep = envelope("symfamily", opt);
  std::vector<double> alphas = grid.empty() ? std::vector<double>{alpha}
                                            : grid;
  SweepResult sw = sweep(dim, alphas, opt.tol, opt.seed);

  Json rows = Json::array();
  for (const SweepRow& r : sw.rows) {
    Json row;
    row["alpha"] = r.alpha;
    row["rank1"] = r.classification.is_rank1;
    row["pvm"] = r.classification.is_pvm;
    row["informationally_complete"] =
        r.classification.is_informationally_complete;
    row["extreme_covariant"] = r.classification.is_extreme_covariant;
    row["extreme_global"] = r.classification.is_extreme_global;
    row["ic_span_dim"] = r.classification.ic_span_dim;
    row["ic_min_singular"] = r.ic_min_singular;
    row["min_margin_rank"] = r.min_margin_rank;
    row["margin_covariance_defect"] = r.margin_covariance_defect;
    row["normalization_defect"] = r.classification.normalization_defect;
    row["covariance_defect"] = r.classification.covariance_defect;
    row["k_defect"] = r.k_defect;
    row["normalizer_defect"] = r.normalizer_defect;
    row["effect_defect"] = r.effect_defect;
    row["jump"] = r.jump;
    rows.push_back(std::move(row));
  }
  rep["dim"] = sw.dim;
  rep["alpha0"] = symfam_alpha0();
  rep["rows"] = std::move(rows);
  rep["max_rate"] = sw.max_rate;
  rep["timings_ms"] = {{"total", ms_since(t0)}};
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(),
              prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_primitive()) {
    out.emplace_back(prefix, csv_cell(j));
  }
  // Arrays are not flattened: tables have their own path, spectra stay JSON.
}

}  // namespace

std::string report_to_csv(const Json& report) {
  std::string out;
  if (report.contains("rows") && report["rows"].is_array() &&
      !report["rows"].empty() && report["rows"][0].is_object()) {
    const Json& rows = report["rows"];
    bool first = true;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
      if (!first) out += ",";
      first = false;
      out += it.key();
    }
    out += "\n";
    for (const Json& row : rows) {
      first = true;
      for (auto it = row.begin(); it != row.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += csv_cell(it.value());
      }
      out += "\n";
    }
    return out;
  }
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(report, "", cells);
  std::string header, data;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) {
      header += ",";
      data += ",";
    }
    header += cells[i].first;
    data += cells[i].second;
  }
  return header + "\n" + data + "\n";
}

}  // namespace covkit::cli
