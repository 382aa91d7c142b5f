#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <covkit/error.hpp>
#include <covkit/instrument.hpp>
#include <covkit/naimark.hpp>
#include <covkit/solver.hpp>
#include <covkit/symfam.hpp>

#include <memory>

namespace py = pybind11;
using namespace covkit;

namespace {

// The library hands groups around as shared_ptr<const FiniteGroup>; the
// Python holder is the mutable shared_ptr, so factory results are unwrapped
// here (bound objects are never mutated).
std::shared_ptr<FiniteGroup> unconst(const GroupPtr& g) {
  return std::const_pointer_cast<FiniteGroup>(g);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Covariant observables, instruments, and channels under finite "
      "symmetry groups";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  m.attr("DEFAULT_SEED") = py::int_(kDefaultSeed);

  // ---- numerics ----------------------------------------------------------
  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("unit", &Tolerances::unit)
      .def_readwrite("lin", &Tolerances::lin)
      .def_readwrite("psd", &Tolerances::psd)
      .def_readwrite("rank_cutoff", &Tolerances::rank_cutoff)
      .def_readwrite("character", &Tolerances::character);

  m.def("frobenius", &frobenius, py::arg("a"));
  m.def("defect", &defect, py::arg("a"), py::arg("b"));
  m.def("hermitian_basis", &hermitian_basis, py::arg("dim"));

  // ---- groups and spaces -------------------------------------------------
  py::class_<FiniteGroup, std::shared_ptr<FiniteGroup>>(m, "Group")
      .def_readonly("order", &FiniteGroup::order)
      .def_readonly("identity", &FiniteGroup::identity)
      .def_readonly("degree", &FiniteGroup::degree)
      .def_readonly("images", &FiniteGroup::images)
      .def("mult", &FiniteGroup::mult, py::arg("g"), py::arg("h"))
      .def("inv", &FiniteGroup::inv, py::arg("g"))
      .def("label", &FiniteGroup::label, py::arg("g"))
      .def("element_by_label", &FiniteGroup::element_by_label, py::arg("lab"))
      .def("__len__", [](const FiniteGroup& g) { return g.order; });

  m.def("symmetric_group",
        [](int n) { return unconst(symmetric_group(n)); }, py::arg("n"));
  m.def("cyclic_group", [](int n) { return unconst(cyclic_group(n)); },
        py::arg("n"));
  m.def(
      "direct_product",
      [](const std::shared_ptr<FiniteGroup>& a,
         const std::shared_ptr<FiniteGroup>& b) {
        return unconst(direct_product(a, b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "group_from_table",
      [](std::vector<int> table, std::vector<std::string> labels) {
        return unconst(group_from_table(std::move(table), std::move(labels)));
      },
      py::arg("table"), py::arg("labels") = std::vector<std::string>{});

  py::enum_<SectionPolicy>(m, "SectionPolicy")
      .value("LEX_MIN", SectionPolicy::LexMin)
      .value("MIN_MOVED", SectionPolicy::MinMoved);

  py::class_<GSpace>(m, "GSpace")
      .def_property_readonly("group",
                             [](const GSpace& s) { return unconst(s.group); })
      .def_readonly("num_points", &GSpace::num_points)
      .def_readonly("orbits", &GSpace::orbits)
      .def_readonly("orbit_of", &GSpace::orbit_of)
      .def_readonly("base_point", &GSpace::base_point)
      .def_readonly("stabilizer", &GSpace::stabilizer)
      .def_readonly("section", &GSpace::section)
      .def_readonly("power", &GSpace::power)
      .def_readonly("base_points", &GSpace::base_points)
      .def("act", &GSpace::act, py::arg("g"), py::arg("x"))
      .def("num_orbits", &GSpace::num_orbits)
      .def("point_label", &GSpace::point_label, py::arg("x"));

  m.def(
      "make_gspace",
      [](const std::shared_ptr<FiniteGroup>& g, std::vector<int> action,
         SectionPolicy policy) {
        return make_gspace(g, std::move(action), policy);
      },
      py::arg("group"), py::arg("action"),
      py::arg("policy") = SectionPolicy::LexMin);
  m.def(
      "natural_action_space",
      [](const std::shared_ptr<FiniteGroup>& g, SectionPolicy policy) {
        return natural_action_space(g, policy);
      },
      py::arg("group"), py::arg("policy") = SectionPolicy::LexMin);
  m.def(
      "product_action_space",
      [](const std::shared_ptr<FiniteGroup>& g, int power,
         SectionPolicy policy) {
        return product_action_space(g, power, policy);
      },
      py::arg("group"), py::arg("power"),
      py::arg("policy") = SectionPolicy::LexMin);
  m.def(
      "regular_action_space",
      [](const std::shared_ptr<FiniteGroup>& g, SectionPolicy policy) {
        return regular_action_space(g, policy);
      },
      py::arg("group"), py::arg("policy") = SectionPolicy::LexMin);
  m.def(
      "singleton_space",
      [](const std::shared_ptr<FiniteGroup>& g) { return singleton_space(g); },
      py::arg("group"));

  // ---- representations ---------------------------------------------------
  py::class_<Representation>(m, "Representation")
      .def_property_readonly(
          "group", [](const Representation& r) { return unconst(r.group); })
      .def_readonly("dim", &Representation::dim)
      .def_readonly("matrices", &Representation::matrices)
      .def_readonly("multiplier", &Representation::multiplier)
      .def("projective", &Representation::projective)
      .def("phase", &Representation::phase, py::arg("g"), py::arg("h"))
      .def("__call__",
           [](const Representation& r, int g) -> const Matrix& {
             return r(g);
           },
           py::arg("g"), py::return_value_policy::copy);

  m.def(
      "permutation_rep",
      [](const std::shared_ptr<FiniteGroup>& g) { return permutation_rep(g); },
      py::arg("group"));
  m.def(
      "regular_rep",
      [](const std::shared_ptr<FiniteGroup>& g) { return regular_rep(g); },
      py::arg("group"));
  m.def(
      "matrix_rep",
      [](const std::shared_ptr<FiniteGroup>& g, std::vector<Matrix> mats,
         std::optional<Matrix> multiplier) {
        return matrix_rep(g, std::move(mats), std::move(multiplier));
      },
      py::arg("group"), py::arg("matrices"),
      py::arg("multiplier") = std::nullopt);
  m.def(
      "infer_multiplier",
      [](const std::shared_ptr<FiniteGroup>& g,
         const std::vector<Matrix>& u) { return infer_multiplier(*g, u); },
      py::arg("group"), py::arg("matrices"));

  py::class_<RepReport>(m, "RepReport")
      .def_readonly("unitarity_defect", &RepReport::unitarity_defect)
      .def_readonly("law_defect", &RepReport::law_defect)
      .def_readonly("multiplier_defect", &RepReport::multiplier_defect)
      .def("passes", &RepReport::pass, py::arg("tol"));
  m.def("validate_representation", &validate_representation, py::arg("rep"));

  py::class_<MultiplierAnalysis>(m, "MultiplierAnalysis")
      .def_readonly("p", &MultiplierAnalysis::p)
      .def_readonly("t", &MultiplierAnalysis::t)
      .def_readonly("exponent", &MultiplierAnalysis::exponent)
      .def_readonly("adjusted", &MultiplierAnalysis::adjusted)
      .def_readonly("rep_phase", &MultiplierAnalysis::rep_phase)
      .def_readonly("snap_defect", &MultiplierAnalysis::snap_defect);
  m.def("multiplier_order", &multiplier_order, py::arg("rep"),
        py::arg("tol") = Tolerances{});
  m.def("adjusted_rep", &adjusted_rep, py::arg("rep"), py::arg("analysis"));

  py::class_<CentralExtension>(m, "CentralExtension")
      .def_property_readonly(
          "base", [](const CentralExtension& e) { return unconst(e.base); })
      .def_property_readonly(
          "extended",
          [](const CentralExtension& e) { return unconst(e.extended); })
      .def_readonly("p", &CentralExtension::p)
      .def("id", &CentralExtension::id, py::arg("g"), py::arg("k"))
      .def("parent_of", &CentralExtension::parent_of, py::arg("id"))
      .def("power_of", &CentralExtension::power_of, py::arg("id"));
  m.def(
      "central_extension",
      [](const std::shared_ptr<FiniteGroup>& g, const MultiplierAnalysis& ma) {
        return central_extension(g, ma);
      },
      py::arg("group"), py::arg("analysis"));
  m.def("lift_rep", &lift_rep, py::arg("extension"), py::arg("rep"),
        py::arg("analysis"));
  m.def("lift_space", &lift_space, py::arg("extension"), py::arg("space"));

  // ---- irreducible classes -----------------------------------------------
  py::class_<Subgroup>(m, "Subgroup")
      .def_property_readonly(
          "parent", [](const Subgroup& s) { return unconst(s.parent); })
      .def_property_readonly(
          "local", [](const Subgroup& s) { return unconst(s.local); })
      .def_readonly("elements", &Subgroup::elements)
      .def("order", &Subgroup::order)
      .def("local_of", &Subgroup::local_of, py::arg("parent_id"));
  m.def(
      "make_subgroup",
      [](const std::shared_ptr<FiniteGroup>& parent,
         std::vector<int> elements) {
        return make_subgroup(parent, std::move(elements));
      },
      py::arg("parent"), py::arg("elements"));

  py::class_<IrrepClass>(m, "IrrepClass")
      .def_readonly("dim", &IrrepClass::dim)
      .def_readonly("matrices", &IrrepClass::matrices)
      .def_readonly("character", &IrrepClass::character);
  m.def("complete_dual", &complete_dual, py::arg("subgroup"),
        py::arg("seed") = kDefaultSeed, py::arg("tol") = Tolerances{});

  // ---- systems -------------------------------------------------------------
  py::class_<SystemContext, std::shared_ptr<SystemContext>>(m, "System")
      .def_property_readonly(
          "space", [](const SystemContext& s) { return s.space(); })
      .def_property_readonly(
          "rep", [](const SystemContext& s) { return s.rep(); })
      .def_property_readonly(
          "group", [](const SystemContext& s) { return unconst(s.group()); })
      .def_property_readonly(
          "tol", [](const SystemContext& s) { return s.tol(); })
      .def_property_readonly("seed",
                             [](const SystemContext& s) { return s.seed(); })
      .def_property_readonly("dim",
                             [](const SystemContext& s) { return s.dim(); })
      .def_property_readonly(
          "num_points", [](const SystemContext& s) { return s.num_points(); })
      .def_property_readonly(
          "num_orbits", [](const SystemContext& s) { return s.num_orbits(); })
      .def("orbit_size", &SystemContext::orbit_size, py::arg("o"))
      .def("stabilizer_order", &SystemContext::stabilizer_order, py::arg("o"))
      .def("dual", &SystemContext::dual, py::arg("o"),
           py::return_value_policy::copy)
      .def("group_average", &SystemContext::group_average, py::arg("a"))
      .def("orbit_sum", &SystemContext::orbit_sum, py::arg("o"),
           py::arg("seed"))
      .def("transport", &SystemContext::transport, py::arg("x"),
           py::arg("seed"));

  m.def("make_system", &make_system, py::arg("space"), py::arg("rep"),
        py::arg("tol") = Tolerances{}, py::arg("seed") = kDefaultSeed);

  // ---- observables ---------------------------------------------------------
  py::class_<Seed>(m, "Seed")
      .def(py::init([](int orbit, Matrix k) {
             return Seed{orbit, std::move(k)};
           }),
           py::arg("orbit"), py::arg("k"))
      .def_readonly("orbit", &Seed::orbit)
      .def_readonly("k", &Seed::k);

  py::class_<CovariantPOVM>(m, "CovariantPOVM")
      .def_readonly("system", &CovariantPOVM::system)
      .def_readonly("effects", &CovariantPOVM::effects)
      .def_readonly("seeds", &CovariantPOVM::seeds)
      .def("normalizer", &CovariantPOVM::normalizer)
      .def("normalization_defect", &CovariantPOVM::normalization_defect)
      .def("normalized", &CovariantPOVM::normalized, py::arg("tol"))
      .def("covariance_defect", &CovariantPOVM::covariance_defect);

  m.def("build_from_seeds", &build_from_seeds, py::arg("system"),
        py::arg("seeds"));
  m.def("povm_from_effects", &povm_from_effects, py::arg("system"),
        py::arg("effects"));

  py::class_<NormalizationResult>(m, "NormalizationResult")
      .def_readonly("povm", &NormalizationResult::povm)
      .def_readonly("k", &NormalizationResult::k)
      .def_readonly("inv_sqrt", &NormalizationResult::inv_sqrt)
      .def_readonly("support", &NormalizationResult::support)
      .def_readonly("full_rank", &NormalizationResult::full_rank)
      .def_readonly("defect", &NormalizationResult::defect);
  m.def("normalize", &normalize, py::arg("povm"));

  py::class_<ObsClassification>(m, "ObsClassification")
      .def_readonly("is_rank1", &ObsClassification::is_rank1)
      .def_readonly("is_pvm", &ObsClassification::is_pvm)
      .def_readonly("is_norm1", &ObsClassification::is_norm1)
      .def_readonly("is_informationally_complete",
                    &ObsClassification::is_informationally_complete)
      .def_readonly("is_extreme_covariant",
                    &ObsClassification::is_extreme_covariant)
      .def_readonly("is_extreme_global",
                    &ObsClassification::is_extreme_global)
      .def_readonly("effect_ranks", &ObsClassification::effect_ranks)
      .def_readonly("zero_orbit", &ObsClassification::zero_orbit)
      .def_readonly("ic_span_dim", &ObsClassification::ic_span_dim)
      .def_readonly("ic_singulars", &ObsClassification::ic_singulars)
      .def_readonly("extreme_covariant_singulars",
                    &ObsClassification::extreme_covariant_singulars)
      .def_readonly("extreme_global_singulars",
                    &ObsClassification::extreme_global_singulars)
      .def_readonly("psd_margin", &ObsClassification::psd_margin)
      .def_readonly("normalization_defect",
                    &ObsClassification::normalization_defect)
      .def_readonly("covariance_defect",
                    &ObsClassification::covariance_defect)
      .def_readonly("pvm_defect", &ObsClassification::pvm_defect)
      .def_readonly("norm1_defect", &ObsClassification::norm1_defect)
      .def_readonly("seed", &ObsClassification::seed)
      .def_readonly("perturbation", &ObsClassification::perturbation);
  m.def("classify", &classify, py::arg("povm"));

  py::class_<Margins>(m, "Margins")
      .def_readonly("row", &Margins::row)
      .def_readonly("col", &Margins::col)
      .def_readonly("covariance_defect", &Margins::covariance_defect);
  m.def("margins", &margins, py::arg("povm"));
  m.def("drop_zero_orbits", &drop_zero_orbits, py::arg("povm"));

  py::class_<VectorFormCopy>(m, "VectorFormCopy")
      .def_readonly("orbit", &VectorFormCopy::orbit)
      .def_readonly("cls", &VectorFormCopy::cls)
      .def_readonly("m", &VectorFormCopy::m)
      .def_readonly("lam", &VectorFormCopy::lambda)
      .def_readonly("isometry", &VectorFormCopy::isometry);
  py::class_<VectorForm>(m, "VectorForm")
      .def_readonly("copies", &VectorForm::copies)
      .def_readonly("reconstruction_defect",
                    &VectorForm::reconstruction_defect);
  m.def("recover_vector_form", &recover_vector_form, py::arg("povm"));

  // ---- brute-force solver --------------------------------------------------
  py::class_<SolverResult>(m, "SolverResult")
      .def_readonly("system", &SolverResult::system)
      .def_readonly("linear_dim", &SolverResult::linear_dim)
      .def_readonly("affine_dim", &SolverResult::affine_dim)
      .def_readonly("linear_basis", &SolverResult::linear_basis)
      .def_readonly("affine_basis", &SolverResult::affine_basis)
      .def_readonly("particular", &SolverResult::particular)
      .def_readonly("projector_spectrum", &SolverResult::projector_spectrum)
      .def("decode", &SolverResult::decode, py::arg("coords"))
      .def("encode", &SolverResult::encode, py::arg("effects"));
  m.def("solve_covariant", &solve_covariant, py::arg("system"));
  m.def("linear_membership_defect", &linear_membership_defect,
        py::arg("solution"), py::arg("effects"));
  m.def("affine_membership_defect", &affine_membership_defect,
        py::arg("solution"), py::arg("effects"));

  // ---- refinement and dilation ----------------------------------------------
  py::class_<RefinedPOVM>(m, "RefinedPOVM")
      .def_readonly("parent", &RefinedPOVM::parent)
      .def_readonly("d", &RefinedPOVM::d)
      .def_readonly("zero_orbit", &RefinedPOVM::zero_orbit)
      .def_readonly("refined", &RefinedPOVM::refined)
      .def_readonly("labels", &RefinedPOVM::labels)
      .def_readonly("coset_defect", &RefinedPOVM::coset_defect)
      .def_readonly("post_processing_defect",
                    &RefinedPOVM::post_processing_defect)
      .def("point", &RefinedPOVM::point, py::arg("orbit"), py::arg("g"));
  m.def("refine", &refine, py::arg("povm"));

  py::class_<NaimarkBundle>(m, "NaimarkBundle")
      .def_readonly("refined", &NaimarkBundle::refined)
      .def_readonly("dim", &NaimarkBundle::dim)
      .def_readonly("j", &NaimarkBundle::j)
      .def_readonly("v", &NaimarkBundle::v)
      .def_readonly("labels", &NaimarkBundle::labels)
      .def_readonly("reproduction_defect", &NaimarkBundle::reproduction_defect)
      .def_readonly("gram_defect", &NaimarkBundle::gram_defect)
      .def_readonly("isometry_defect", &NaimarkBundle::isometry_defect)
      .def_readonly("intertwining_defect", &NaimarkBundle::intertwining_defect)
      .def_readonly("v_law_defect", &NaimarkBundle::v_law_defect)
      .def_readonly("q_covariance_defect", &NaimarkBundle::q_covariance_defect)
      .def_readonly("minimal", &NaimarkBundle::minimal)
      .def("q", &NaimarkBundle::q, py::arg("orbit"), py::arg("g"));
  m.def("dilate", &dilate, py::arg("refined"));
  m.def("trivialize_multiplier", &trivialize_multiplier, py::arg("bundle"),
        py::arg("analysis"));

  py::class_<SymEmbedding>(m, "SymEmbedding")
      .def_readonly("num_orbits", &SymEmbedding::num_orbits)
      .def_readonly("group_order", &SymEmbedding::group_order)
      .def_readonly("materialized", &SymEmbedding::materialized)
      .def_property_readonly(
          "sym",
          [](const SymEmbedding& e) {
            return e.sym ? unconst(e.sym) : nullptr;
          })
      .def_readonly("v_bar", &SymEmbedding::v_bar)
      .def_readonly("translations", &SymEmbedding::translations)
      .def_readonly("numbering", &SymEmbedding::numbering)
      .def_readonly("law_defect", &SymEmbedding::law_defect)
      .def_readonly("q_covariance_defect", &SymEmbedding::q_covariance_defect)
      .def_readonly("restriction_defect", &SymEmbedding::restriction_defect)
      .def("evaluate", &SymEmbedding::evaluate, py::arg("pi"));
  m.def("embed_in_sym", &embed_in_sym, py::arg("bundle"),
        py::arg("allow_on_demand") = false);

  // ---- instruments -----------------------------------------------------------
  py::class_<IntertwinerBlock>(m, "IntertwinerBlock")
      .def(py::init([](int orbit, int cls,
                       std::vector<std::vector<Matrix>> ops) {
             return IntertwinerBlock{orbit, cls, std::move(ops)};
           }),
           py::arg("orbit"), py::arg("cls"), py::arg("ops"))
      .def_readonly("orbit", &IntertwinerBlock::orbit)
      .def_readonly("cls", &IntertwinerBlock::cls)
      .def_readonly("ops", &IntertwinerBlock::ops)
      .def("multiplicity", &IntertwinerBlock::multiplicity);

  py::class_<IntertwinerSet>(m, "IntertwinerSet")
      .def(py::init([](SystemPtr sys, Representation v,
                       std::vector<IntertwinerBlock> blocks) {
             return IntertwinerSet{std::move(sys), std::move(v),
                                   std::move(blocks)};
           }),
           py::arg("system"), py::arg("v"), py::arg("blocks"))
      .def_readonly("system", &IntertwinerSet::system)
      .def_readonly("v", &IntertwinerSet::v)
      .def_readonly("blocks", &IntertwinerSet::blocks)
      .def("in_dim", &IntertwinerSet::in_dim)
      .def("out_dim", &IntertwinerSet::out_dim);

  py::class_<IntertwinerReport>(m, "IntertwinerReport")
      .def_readonly("intertwining_defect",
                    &IntertwinerReport::intertwining_defect)
      .def_readonly("normalization_defect",
                    &IntertwinerReport::normalization_defect)
      .def_readonly("gram_spectra", &IntertwinerReport::gram_spectra)
      .def_readonly("minimal", &IntertwinerReport::minimal)
      .def_readonly("normalized", &IntertwinerReport::normalized);
  m.def("validate_intertwiners", &validate_intertwiners, py::arg("set"));

  py::class_<RenormalizationResult>(m, "RenormalizationResult")
      .def_readonly("set", &RenormalizationResult::set)
      .def_readonly("k", &RenormalizationResult::k)
      .def_readonly("inv_sqrt", &RenormalizationResult::inv_sqrt)
      .def_readonly("full_rank", &RenormalizationResult::full_rank)
      .def_readonly("defect", &RenormalizationResult::defect);
  m.def("renormalize_intertwiners", &renormalize_intertwiners,
        py::arg("set"));
  m.def("reduce_to_minimal", &reduce_to_minimal, py::arg("set"));

  py::class_<KrausLabel>(m, "KrausLabel")
      .def_readonly("orbit", &KrausLabel::orbit)
      .def_readonly("cls", &KrausLabel::cls)
      .def_readonly("i", &KrausLabel::i)
      .def_readonly("m", &KrausLabel::m);

  py::class_<CovariantInstrument>(m, "CovariantInstrument")
      .def_readonly("system", &CovariantInstrument::system)
      .def_readonly("v", &CovariantInstrument::v)
      .def_readonly("source", &CovariantInstrument::source)
      .def_readonly("kraus", &CovariantInstrument::kraus)
      .def_readonly("labels", &CovariantInstrument::labels)
      .def("apply", &CovariantInstrument::apply, py::arg("x"), py::arg("rho"))
      .def("heisenberg", &CovariantInstrument::heisenberg, py::arg("x"),
           py::arg("b"))
      .def("povm", &CovariantInstrument::povm)
      .def("covariance_defect", &CovariantInstrument::covariance_defect);
  m.def("build_instrument", &build_instrument, py::arg("set"));
  m.def("kraus_at", &kraus_at, py::arg("set"), py::arg("x"), py::arg("g"));
  m.def("nuclear_instrument", &nuclear_instrument, py::arg("povm"),
        py::arg("v"), py::arg("sigma_seeds"));

  py::class_<DilationBundle>(m, "DilationBundle")
      .def_readonly("dim", &DilationBundle::dim)
      .def_readonly("j", &DilationBundle::j)
      .def_readonly("p", &DilationBundle::p)
      .def_readonly("u_bar", &DilationBundle::u_bar)
      .def_readonly("isometry_defect", &DilationBundle::isometry_defect)
      .def_readonly("stinespring_defect", &DilationBundle::stinespring_defect)
      .def_readonly("intertwining_defect",
                    &DilationBundle::intertwining_defect)
      .def_readonly("imprimitivity_defect",
                    &DilationBundle::imprimitivity_defect)
      .def_readonly("minimal", &DilationBundle::minimal);
  m.def("minimal_dilation", &minimal_dilation, py::arg("set"));

  py::class_<InstrExtremality>(m, "InstrExtremality")
      .def_readonly("extreme", &InstrExtremality::extreme)
      .def_readonly("singular_values", &InstrExtremality::singular_values)
      .def_readonly("witness", &InstrExtremality::witness);
  m.def("extreme_in_covariance_structure", &extreme_in_covariance_structure,
        py::arg("set"));
  m.def("extreme_global", &extreme_global, py::arg("instrument"));

  py::class_<WitnessSplit>(m, "WitnessSplit")
      .def_readonly("plus", &WitnessSplit::plus)
      .def_readonly("minus", &WitnessSplit::minus)
      .def_readonly("average_defect", &WitnessSplit::average_defect);
  m.def("split_by_witness", &split_by_witness, py::arg("set"),
        py::arg("witness"));
  m.def("intertwiner_solution_basis", &intertwiner_solution_basis,
        py::arg("system"), py::arg("v"), py::arg("orbit"), py::arg("cls"));

  m.def("channel_system", &channel_system, py::arg("rep"),
        py::arg("tol") = Tolerances{}, py::arg("seed") = kDefaultSeed);
  py::class_<ChannelReport>(m, "ChannelReport")
      .def_readonly("validation", &ChannelReport::validation)
      .def_readonly("extremality", &ChannelReport::extremality)
      .def_readonly("commutation_defect", &ChannelReport::commutation_defect);
  m.def("channel_extreme", &channel_extreme, py::arg("set"));

  // ---- the closed-form family ------------------------------------------------
  py::class_<SymFamilySpec>(m, "SymFamilySpec")
      .def(py::init([](int dim, double alpha) {
             return SymFamilySpec{dim, alpha};
           }),
           py::arg("dim"), py::arg("alpha"))
      .def_readonly("dim", &SymFamilySpec::dim)
      .def_readonly("alpha", &SymFamilySpec::alpha);

  m.def("symfam_alpha0", &symfam_alpha0);
  m.def("symfam_k", &symfam_k, py::arg("spec"));
  m.def("symfam_normalizer", &symfam_normalizer, py::arg("spec"));
  m.def("symfam_effect", &symfam_effect, py::arg("spec"), py::arg("m"),
        py::arg("n"));
  m.def("symfam_alpha0_vector", &symfam_alpha0_vector, py::arg("dim"),
        py::arg("m"), py::arg("n"));

  py::class_<SymFamily>(m, "SymFamily")
      .def_readonly("spec", &SymFamily::spec)
      .def_readonly("system", &SymFamily::system)
      .def_readonly("povm", &SymFamily::povm)
      .def_readonly("k", &SymFamily::k)
      .def_readonly("inv_sqrt", &SymFamily::inv_sqrt)
      .def_readonly("k_defect", &SymFamily::k_defect)
      .def_readonly("normalizer_defect", &SymFamily::normalizer_defect)
      .def_readonly("effect_defect", &SymFamily::effect_defect);
  m.def("generate",
        py::overload_cast<const SymFamilySpec&>(&generate), py::arg("spec"));
  m.def("generate",
        py::overload_cast<const SymFamilySpec&, const SystemPtr&>(&generate),
        py::arg("spec"), py::arg("system"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("alpha", &SweepRow::alpha)
      .def_readonly("classification", &SweepRow::classification)
      .def_readonly("margin_covariance_defect",
                    &SweepRow::margin_covariance_defect)
      .def_readonly("min_margin_rank", &SweepRow::min_margin_rank)
      .def_readonly("ic_min_singular", &SweepRow::ic_min_singular)
      .def_readonly("jump", &SweepRow::jump)
      .def_readonly("k_defect", &SweepRow::k_defect)
      .def_readonly("normalizer_defect", &SweepRow::normalizer_defect)
      .def_readonly("effect_defect", &SweepRow::effect_defect);
  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("dim", &SweepResult::dim)
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("max_rate", &SweepResult::max_rate);
  m.def("sweep", &sweep, py::arg("dim"), py::arg("grid"),
        py::arg("tol") = Tolerances{}, py::arg("seed") = kDefaultSeed);
}
