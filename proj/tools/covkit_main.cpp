#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "covkit/error.hpp"
#include "runner.hpp"

namespace {

using covkit::cli::Document;
using covkit::cli::EffectiveOptions;
using covkit::cli::Json;

// Command-line state shared by every subcommand.
struct Flags {
  std::string input;  // document path, "-" for stdin
  std::string out;
  std::string format = "json";
  double tol_lin = 0, tol_psd = 0, rank_cutoff = 0;
  bool has_tol_lin = false, has_tol_psd = false, has_rank_cutoff = false;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string section_policy;
};

void add_common(CLI::App* sub, Flags& f, bool wants_input) {
  if (wants_input)
    sub->add_option("input", f.input, "input document (JSON), - for stdin")
        ->required();
  sub->add_option("--tol-lin", f.tol_lin, "linear-identity tolerance")
      ->each([&f](const std::string&) { f.has_tol_lin = true; });
  sub->add_option("--tol-psd", f.tol_psd, "positivity tolerance")
      ->each([&f](const std::string&) { f.has_tol_psd = true; });
  sub->add_option("--rank-cutoff", f.rank_cutoff,
                  "relative singular value cutoff")
      ->each([&f](const std::string&) { f.has_rank_cutoff = true; });
  sub->add_option("--seed", f.seed, "RNG seed")
      ->each([&f](const std::string&) { f.has_seed = true; });
  sub->add_option("--section-policy", f.section_policy,
                  "coset section policy: lex_min | min_moved")
      ->check(CLI::IsMember({"lex_min", "min_moved"}));
  sub->add_option("--out", f.out, "write the report to this file");
  sub->add_option("--format", f.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

Json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in)
      covkit::fail_validation("cannot open input document: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    covkit::fail_validation(std::string("json: parse error: ") + e.what());
  }
}

// Defaults, overridden by document options, overridden by explicit flags.
EffectiveOptions layer_options(const Document& doc, const Flags& f) {
  EffectiveOptions opt;
  opt.tol = doc.options.tol;
  opt.seed = doc.options.seed;
  opt.policy = doc.options.policy;
  if (f.has_tol_lin) opt.tol.lin = f.tol_lin;
  if (f.has_tol_psd) opt.tol.psd = f.tol_psd;
  if (f.has_rank_cutoff) opt.tol.rank_cutoff = f.rank_cutoff;
  if (f.has_seed) opt.seed = f.seed;
  if (f.section_policy == "lex_min")
    opt.policy = covkit::SectionPolicy::LexMin;
  else if (f.section_policy == "min_moved")
    opt.policy = covkit::SectionPolicy::MinMoved;
  for (double t : {opt.tol.lin, opt.tol.psd, opt.tol.rank_cutoff})
    if (!(t > 0)) covkit::fail_validation("tolerance overrides must be positive");
  return opt;
}

void write_report(const Json& report, const Flags& f) {
  const std::string text = f.format == "csv"
                               ? covkit::cli::report_to_csv(report)
                               : covkit::cli::canonical_dump(report);
  if (f.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(f.out);
  if (!out) covkit::fail_validation("cannot open output file: " + f.out);
  out << text;
}

// a0:a1:n -> n points from a0 to a1 inclusive.
std::vector<double> parse_grid(const std::string& spec) {
  double a0 = 0, a1 = 0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(spec);
  if (!(ss >> a0 >> c1 >> a1 >> c2 >> n) || c1 != ':' || c2 != ':' ||
      !ss.eof() || n < 1)
    covkit::fail_validation("grid must be a0:a1:n with n >= 1, got \"" +
                            spec + "\"");
  std::vector<double> grid;
  for (int i = 0; i < n; ++i)
    grid.push_back(n == 1 ? a0 : a0 + (a1 - a0) * i / (n - 1));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariant observable and instrument toolkit"};
  app.require_subcommand(1);

  Flags flags;
  std::string instrument_sub, channel_sub;
  int fam_dim = 3;
  double fam_alpha = 0;
  std::string fam_grid;

  CLI::App* classify = app.add_subcommand(
      "classify", "build a POVM from seeds, normalize, classify");
  add_common(classify, flags, true);
  CLI::App* normalize = app.add_subcommand(
      "normalize", "normalize a seed family; emits a normalized document");
  add_common(normalize, flags, true);
  CLI::App* solve = app.add_subcommand(
      "solve", "brute-force basis of the covariant solution space");
  add_common(solve, flags, true);
  CLI::App* dilate = app.add_subcommand(
      "dilate", "refine a rank-1 POVM and build its Naimark bundle");
  add_common(dilate, flags, true);

  CLI::App* instrument =
      app.add_subcommand("instrument", "covariant instrument commands");
  instrument
      ->add_option("action", instrument_sub,
                   "validate | build | dilate | extreme")
      ->required()
      ->check(CLI::IsMember({"validate", "build", "dilate", "extreme"}));
  add_common(instrument, flags, true);

  CLI::App* channel =
      app.add_subcommand("channel", "covariant channel commands");
  channel->add_option("action", channel_sub, "validate | extreme")
      ->required()
      ->check(CLI::IsMember({"validate", "extreme"}));
  add_common(channel, flags, true);

  CLI::App* symfamily = app.add_subcommand(
      "symfamily", "the symmetric-group pair family: generate and sweep");
  symfamily->add_option("--dim", fam_dim, "Hilbert space dimension D")
      ->required();
  symfamily->add_option("--alpha", fam_alpha, "family parameter");
  symfamily->add_option("--grid", fam_grid, "alpha grid a0:a1:n");
  add_common(symfamily, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    Json report;
    if (symfamily->parsed()) {
      Document empty;
      EffectiveOptions opt = layer_options(empty, flags);
      std::vector<double> grid;
      if (!fam_grid.empty()) grid = parse_grid(fam_grid);
      report = covkit::cli::run_symfamily(fam_dim, fam_alpha, grid, opt);
    } else {
      const Json input = read_document(flags.input);
      const Document doc = covkit::cli::parse_document(input);
      const EffectiveOptions opt = layer_options(doc, flags);
      if (classify->parsed())
        report = covkit::cli::run_classify(doc, opt);
      else if (normalize->parsed())
        report = covkit::cli::run_normalize(doc, input, opt);
      else if (solve->parsed())
        report = covkit::cli::run_solve(doc, opt);
      else if (dilate->parsed())
        report = covkit::cli::run_dilate(doc, opt);
      else if (instrument->parsed())
        report = covkit::cli::run_instrument(doc, instrument_sub, opt);
      else if (channel->parsed())
        report = covkit::cli::run_channel(doc, channel_sub, opt);
    }
    write_report(report, flags);
    return 0;
  } catch (const covkit::ValidationError& e) {
    Json err = {{"schema", "covkit/1"},
                {"error", {{"kind", "validation"}, {"message", e.what()}}}};
    std::cerr << covkit::cli::canonical_dump(err);
    return 1;
  } catch (const covkit::NumericalError& e) {
    Json err = {{"schema", "covkit/1"},
                {"error", {{"kind", "numerical"}, {"message", e.what()}}}};
    std::cerr << covkit::cli::canonical_dump(err);
    return 2;
  }
}
