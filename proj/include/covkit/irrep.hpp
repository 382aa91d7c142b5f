#pragma once

#include "covkit/rep.hpp"

namespace covkit {

// A subgroup presented as parent element ids plus its own local table.
// Local id i corresponds to elements[i]; elements are ascending.
struct Subgroup {
  GroupPtr parent;
  std::vector<int> elements;
  GroupPtr local;
  std::vector<int> parent_to_local;  // -1 outside the subgroup

  int order() const { return local ? local->order : 0; }
  int local_of(int parent_id) const { return parent_to_local[parent_id]; }
};
Subgroup make_subgroup(const GroupPtr& parent, std::vector<int> elements);

// An irreducible class of the subgroup: explicit matrix elements in a fixed
// basis, indexed by local element id.
struct IrrepClass {
  int dim = 0;
  std::vector<Matrix> matrices;
  Vector character;  // per local element
};

// Decomposition of a restricted representation into irreducible blocks with
// aligned copies: every copy of a class carries exactly the class's matrix
// elements, i.e. U(h) S = S eta(h) for each copy isometry S.
struct IrrepDecomposition {
  Subgroup subgroup;
  std::vector<IrrepClass> classes;
  std::vector<int> multiplicity;              // per class, 0 allowed if aligned
  std::vector<std::vector<Matrix>> copies;    // per class, per copy: ambient x dim
  int ambient_dim = 0;

  int num_classes() const { return static_cast<int>(classes.size()); }
  // ambient x (dim*mult): copy-major columns [m*dim + i] = S_m e_i.
  Matrix embedding(int cls) const;
};

// Decompose rep restricted to the given subgroup elements via randomized
// commutant averaging, refining until every block has a scalar commutant.
// When align_to is given (a complete list of target classes), discovered
// blocks are matched by character and rotated onto the target matrix
// elements; the result then lists every target class, possibly with
// multiplicity zero. The restriction must be an ordinary representation.
IrrepDecomposition decompose_restriction(const Representation& rep,
                                         const std::vector<int>& subgroup_elements,
                                         std::uint64_t seed = kDefaultSeed,
                                         const std::vector<IrrepClass>* align_to = nullptr,
                                         const Tolerances& tol = {});

// Every irreducible class of the subgroup, from its regular representation,
// in canonical order (dimension ascending, then character).
std::vector<IrrepClass> complete_dual(const Subgroup& sub,
                                      std::uint64_t seed = kDefaultSeed,
                                      const Tolerances& tol = {});

// Multiplicity of each class of `dual` inside the restriction of rep, by
// character inner products (no basis work).
std::vector<int> class_multiplicities(const Representation& rep,
                                      const Subgroup& sub,
                                      const std::vector<IrrepClass>& dual);

// Cocycle zeta^eta(g, x) = eta(s(x)^{-1} g^{-1} s(gx)), defined on the orbit
// of the space that owns the stabilizer.
Matrix cocycle_eval(const IrrepClass& eta, const Subgroup& stab,
                    const GSpace& space, int orbit, int g, int x);
// Same with a full representation pi in place of eta.
Matrix cocycle_eval(const Representation& pi, const GSpace& space, int orbit,
                    int g, int x);

// Verification helpers used by tests and reports.
double schur_orthogonality_defect(const Subgroup& sub,
                                  const std::vector<IrrepClass>& classes);
double reconstruction_defect(const Representation& rep,
                             const IrrepDecomposition& dec);

}  // namespace covkit
