#pragma once

#include "json_io.hpp"

namespace covkit::cli {

// Effective run options after layering: defaults, then document options,
// then explicit command-line flags.
struct EffectiveOptions {
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  SectionPolicy policy = SectionPolicy::LexMin;
};

Json run_classify(const Document& doc, const EffectiveOptions& opt);
Json run_normalize(const Document& doc, const Json& original,
                   const EffectiveOptions& opt);
Json run_solve(const Document& doc, const EffectiveOptions& opt);
Json run_dilate(const Document& doc, const EffectiveOptions& opt);
Json run_instrument(const Document& doc, const std::string& sub,
                    const EffectiveOptions& opt);
Json run_channel(const Document& doc, const std::string& sub,
                 const EffectiveOptions& opt);
Json run_symfamily(int dim, double alpha, const std::vector<double>& grid,
                   const EffectiveOptions& opt);

// CSV rendering: reports carrying a "rows" table become one CSV line per
// row; anything else flattens its scalar leaves into a two-line CSV.
std::string report_to_csv(const Json& report);

}  // namespace covkit::cli
