#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "covkit/instrument.hpp"
#include "covkit/povm.hpp"
#include "covkit/symfam.hpp"

namespace covkit::cli {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical emission: keys sorted (nlohmann objects already are), floats
// printed with %.17g so emit -> parse -> emit is byte-identical, integers
// kept integral, two-space indentation with scalar arrays inlined.
std::string canonical_dump(const Json& j);

// ---------------------------------------------------------------------------
// Parsed input document. Descriptors stay symbolic: the system is built by
// the runner once the effective tolerances are known (command line overrides
// document options, which override defaults).

struct SpaceDesc {
  enum class Kind { Natural, ProductPower, Regular, Singleton, Action };
  Kind kind = Kind::Natural;
  int power = 1;                       // ProductPower
  std::vector<std::vector<int>> rows;  // Action: rows[g][x]
};

struct RepDesc {
  enum class Kind { Permutation, Regular, Matrices };
  Kind kind = Kind::Permutation;
  std::vector<Matrix> matrices;
  std::optional<Matrix> multiplier;
};

struct RawBlock {
  int orbit = 0;
  int cls = 0;
  std::vector<std::vector<Matrix>> copies;  // copies[m][i]
};

struct ParsedOptions {
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  SectionPolicy policy = SectionPolicy::LexMin;
  bool has_tol_lin = false, has_tol_psd = false, has_rank_cutoff = false;
  bool has_seed = false, has_policy = false;
};

struct Document {
  GroupPtr group;
  std::optional<SpaceDesc> space;
  std::optional<RepDesc> rep;      // U
  std::optional<RepDesc> out_rep;  // V, instrument/channel documents

  enum class Payload { None, Seeds, Intertwiners, Family };
  Payload payload = Payload::None;
  std::vector<Seed> seeds;
  std::vector<RawBlock> blocks;
  SymFamilySpec family;
  std::vector<double> grid;  // optional sweep grid for family payloads

  ParsedOptions options;
};

Document parse_document(const Json& j);

// ---------------------------------------------------------------------------
// Value conversions shared by the parser and the report emitters.
Json complex_to_json(const Complex& z);
Json matrix_to_json(const Matrix& m);
Json real_vector_to_json(const RealVector& v);
Matrix matrix_from_json(const Json& j, const std::string& path);

}  // namespace covkit::cli
