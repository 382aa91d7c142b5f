#include "json_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>

#include "covkit/error.hpp"

namespace covkit::cli {

namespace {

// ---------------------------------------------------------------------------
// Canonical emitter

std::string format_double(double v) {
  if (!std::isfinite(v))
    fail_validation("json: refusing to serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool all_scalar(const Json& arr) {
  for (const auto& e : arr)
    if (e.is_structured()) return false;
  return true;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
  const std::string pad1(2 * static_cast<std::size_t>(indent + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad1 + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (all_scalar(j)) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          emit(e, out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad1;
        emit(e, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();  // ints, strings, bools, null
      return;
  }
}

// ---------------------------------------------------------------------------
// Strict parsing with JSON-path error reporting

struct Cursor {
  const Json* j;
  std::string path;

  [[noreturn]] void fail(const std::string& msg) const {
    fail_validation("json: " + path + ": " + msg);
  }
};

void require_keys(const Cursor& c, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!c.j->is_object()) c.fail("expected an object");
  for (auto it = c.j->begin(); it != c.j->end(); ++it)
    if (!allowed.count(it.key()))
      fail_validation("json: " + c.path + "." + it.key() +
                      ": unknown field (strict schema)");
  for (const auto& k : required)
    if (!c.j->contains(k))
      c.fail("missing required field \"" + k + "\"");
}

std::optional<Cursor> field(const Cursor& c, const std::string& key) {
  if (!c.j->is_object() || !c.j->contains(key)) return std::nullopt;
  return Cursor{&(*c.j)[key], c.path + "." + key};
}

Cursor required(const Cursor& c, const std::string& key) {
  auto f = field(c, key);
  if (!f) c.fail("missing required field \"" + key + "\"");
  return *f;
}

Cursor element(const Cursor& c, std::size_t i) {
  return Cursor{&(*c.j)[i], c.path + "[" + std::to_string(i) + "]"};
}

int as_int(const Cursor& c) {
  if (!c.j->is_number_integer()) c.fail("expected an integer");
  return c.j->get<int>();
}

double as_double(const Cursor& c) {
  if (!c.j->is_number()) c.fail("expected a number");
  return c.j->get<double>();
}

std::uint64_t as_uint64(const Cursor& c) {
  if (!c.j->is_number_unsigned() && !(c.j->is_number_integer() &&
                                      c.j->get<std::int64_t>() >= 0))
    c.fail("expected a non-negative integer");
  return c.j->get<std::uint64_t>();
}

std::string as_string(const Cursor& c) {
  if (!c.j->is_string()) c.fail("expected a string");
  return c.j->get<std::string>();
}

const Json& as_array(const Cursor& c) {
  if (!c.j->is_array()) c.fail("expected an array");
  return *c.j;
}

Complex as_complex(const Cursor& c) {
  if (!c.j->is_array() || c.j->size() != 2 || !(*c.j)[0].is_number() ||
      !(*c.j)[1].is_number())
    c.fail("expected a complex number as [re, im]");
  return {(*c.j)[0].get<double>(), (*c.j)[1].get<double>()};
}

Matrix as_matrix(const Cursor& c) {
  const Json& rows = as_array(c);
  if (rows.empty()) c.fail("expected a non-empty matrix");
  const std::size_t ncols = as_array(element(c, 0)).size();
  if (ncols == 0) c.fail("matrix rows must be non-empty");
  Matrix m(rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Cursor row = element(c, r);
    if (!row.j->is_array() || row.j->size() != ncols)
      row.fail("expected a row of " + std::to_string(ncols) + " entries");
    for (std::size_t k = 0; k < ncols; ++k)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          as_complex(element(row, k));
  }
  return m;
}

Vector as_vector(const Cursor& c) {
  const Json& arr = as_array(c);
  if (arr.empty()) c.fail("expected a non-empty vector");
  Vector v(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = as_complex(element(c, k));
  return v;
}

// ---------------------------------------------------------------------------
// Descriptors

GroupPtr parse_group(const Cursor& c) {
  require_keys(c, {"kind", "n", "factors", "table", "labels"}, {"kind"});
  const std::string kind = as_string(required(c, "kind"));
  if (kind == "symmetric") return symmetric_group(as_int(required(c, "n")));
  if (kind == "cyclic") return cyclic_group(as_int(required(c, "n")));
  if (kind == "product") {
    Cursor fs = required(c, "factors");
    const Json& arr = as_array(fs);
    if (arr.size() < 2) fs.fail("expected at least two factors");
    GroupPtr g = parse_group(element(fs, 0));
    for (std::size_t i = 1; i < arr.size(); ++i)
      g = direct_product(g, parse_group(element(fs, i)));
    return g;
  }
  if (kind == "table") {
    Cursor tc = required(c, "table");
    const Json& rows = as_array(tc);
    const std::size_t n = rows.size();
    std::vector<int> flat;
    flat.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      Cursor row = element(tc, r);
      if (!row.j->is_array() || row.j->size() != n)
        row.fail("expected a square table");
      for (std::size_t k = 0; k < n; ++k)
        flat.push_back(as_int(element(row, k)));
    }
    std::vector<std::string> labels;
    if (auto lc = field(c, "labels")) {
      for (std::size_t i = 0; i < as_array(*lc).size(); ++i)
        labels.push_back(as_string(element(*lc, i)));
    }
    return group_from_table(std::move(flat), std::move(labels));
  }
  required(c, "kind").fail("unknown group kind \"" + kind + "\"");
}

SpaceDesc parse_space(const Cursor& c) {
  require_keys(c, {"kind", "power", "action"}, {"kind"});
  const std::string kind = as_string(required(c, "kind"));
  SpaceDesc d;
  if (kind == "natural") {
    d.kind = SpaceDesc::Kind::Natural;
  } else if (kind == "product_power") {
    d.kind = SpaceDesc::Kind::ProductPower;
    d.power = as_int(required(c, "power"));
  } else if (kind == "regular") {
    d.kind = SpaceDesc::Kind::Regular;
  } else if (kind == "singleton") {
    d.kind = SpaceDesc::Kind::Singleton;
  } else if (kind == "action") {
    d.kind = SpaceDesc::Kind::Action;
    Cursor ac = required(c, "action");
    const Json& rows = as_array(ac);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Cursor row = element(ac, r);
      const Json& arr = as_array(row);
      std::vector<int> images;
      for (std::size_t k = 0; k < arr.size(); ++k)
        images.push_back(as_int(element(row, k)));
      d.rows.push_back(std::move(images));
    }
  } else {
    required(c, "kind").fail("unknown space kind \"" + kind + "\"");
  }
  return d;
}

RepDesc parse_rep(const Cursor& c) {
  require_keys(c, {"kind", "matrices", "multiplier"}, {"kind"});
  const std::string kind = as_string(required(c, "kind"));
  RepDesc d;
  if (kind == "permutation") {
    d.kind = RepDesc::Kind::Permutation;
  } else if (kind == "regular") {
    d.kind = RepDesc::Kind::Regular;
  } else if (kind == "matrices") {
    d.kind = RepDesc::Kind::Matrices;
    Cursor mc = required(c, "matrices");
    const Json& arr = as_array(mc);
    for (std::size_t i = 0; i < arr.size(); ++i)
      d.matrices.push_back(as_matrix(element(mc, i)));
    if (auto mu = field(c, "multiplier")) d.multiplier = as_matrix(*mu);
  } else {
    required(c, "kind").fail("unknown representation kind \"" + kind + "\"");
  }
  return d;
}

ParsedOptions parse_options(const Cursor& c) {
  require_keys(c,
               {"tol_unit", "tol_lin", "tol_psd", "rank_cutoff", "character",
                "seed", "section_policy"},
               {});
  ParsedOptions o;
  if (auto f = field(c, "tol_unit")) o.tol.unit = as_double(*f);
  if (auto f = field(c, "tol_lin")) {
    o.tol.lin = as_double(*f);
    o.has_tol_lin = true;
  }
  if (auto f = field(c, "tol_psd")) {
    o.tol.psd = as_double(*f);
    o.has_tol_psd = true;
  }
  if (auto f = field(c, "rank_cutoff")) {
    o.tol.rank_cutoff = as_double(*f);
    o.has_rank_cutoff = true;
  }
  if (auto f = field(c, "character")) o.tol.character = as_double(*f);
  if (auto f = field(c, "seed")) {
    o.seed = as_uint64(*f);
    o.has_seed = true;
  }
  if (auto f = field(c, "section_policy")) {
    const std::string p = as_string(*f);
    if (p == "lex_min")
      o.policy = SectionPolicy::LexMin;
    else if (p == "min_moved")
      o.policy = SectionPolicy::MinMoved;
    else
      f->fail("unknown section policy \"" + p + "\"");
    o.has_policy = true;
  }
  for (double t : {o.tol.unit, o.tol.lin, o.tol.psd, o.tol.rank_cutoff,
                   o.tol.character})
    if (!(t > 0)) c.fail("tolerance overrides must be positive");
  return o;
}

std::vector<Seed> parse_seeds(const Cursor& c) {
  const Json& arr = as_array(c);
  if (arr.empty()) c.fail("expected at least one seed");
  std::vector<Seed> seeds;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Cursor sc = element(c, i);
    require_keys(sc, {"orbit", "k", "vectors"}, {"orbit"});
    Seed s;
    s.orbit = as_int(required(sc, "orbit"));
    const bool has_k = sc.j->contains("k");
    const bool has_v = sc.j->contains("vectors");
    if (has_k == has_v)
      sc.fail("expected exactly one of \"k\" and \"vectors\"");
    if (has_k) {
      s.k = as_matrix(required(sc, "k"));
    } else {
      Cursor vc = required(sc, "vectors");
      const Json& vs = as_array(vc);
      if (vs.empty()) vc.fail("expected at least one vector");
      for (std::size_t v = 0; v < vs.size(); ++v) {
        Vector d = as_vector(element(vc, v));
        if (s.k.size() == 0) s.k = Matrix::Zero(d.size(), d.size());
        if (d.size() != s.k.rows())
          element(vc, v).fail("vector length mismatch within the seed");
        s.k += d * d.adjoint();
      }
    }
    seeds.push_back(std::move(s));
  }
  return seeds;
}

std::vector<RawBlock> parse_blocks(const Cursor& c) {
  const Json& arr = as_array(c);
  if (arr.empty()) c.fail("expected at least one intertwiner block");
  std::vector<RawBlock> blocks;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Cursor bc = element(c, i);
    require_keys(bc, {"orbit", "cls", "copies"}, {"orbit", "cls", "copies"});
    RawBlock b;
    b.orbit = as_int(required(bc, "orbit"));
    b.cls = as_int(required(bc, "cls"));
    Cursor cc = required(bc, "copies");
    const Json& copies = as_array(cc);
    if (copies.empty()) cc.fail("expected at least one copy");
    for (std::size_t m = 0; m < copies.size(); ++m) {
      Cursor mc = element(cc, m);
      const Json& comps = as_array(mc);
      if (comps.empty()) mc.fail("expected at least one component");
      std::vector<Matrix> copy;
      for (std::size_t k = 0; k < comps.size(); ++k)
        copy.push_back(as_matrix(element(mc, k)));
      b.copies.push_back(std::move(copy));
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

Document parse_document(const Json& j) {
  Cursor root{&j, "$"};
  require_keys(root,
               {"schema", "group", "space", "representation",
                "output_representation", "payload", "options"},
               {"schema"});
  const std::string schema = as_string(required(root, "schema"));
  if (schema != "covkit/1")
    required(root, "schema").fail("unsupported schema \"" + schema + "\"");

  Document doc;
  if (auto oc = field(root, "options")) doc.options = parse_options(*oc);
  if (auto gc = field(root, "group")) doc.group = parse_group(*gc);
  if (auto sc = field(root, "space")) doc.space = parse_space(*sc);
  if (auto rc = field(root, "representation")) doc.rep = parse_rep(*rc);
  if (auto vc = field(root, "output_representation"))
    doc.out_rep = parse_rep(*vc);

  if (auto pc = field(root, "payload")) {
    require_keys(*pc,
                 {"kind", "seeds", "blocks", "dim", "alpha", "grid"},
                 {"kind"});
    const std::string kind = as_string(required(*pc, "kind"));
    if (kind == "seeds") {
      doc.payload = Document::Payload::Seeds;
      doc.seeds = parse_seeds(required(*pc, "seeds"));
    } else if (kind == "intertwiners") {
      doc.payload = Document::Payload::Intertwiners;
      doc.blocks = parse_blocks(required(*pc, "blocks"));
    } else if (kind == "family") {
      doc.payload = Document::Payload::Family;
      doc.family.dim = as_int(required(*pc, "dim"));
      if (auto ac = field(*pc, "alpha")) doc.family.alpha = as_double(*ac);
      if (auto gc = field(*pc, "grid")) {
        for (std::size_t i = 0; i < as_array(*gc).size(); ++i)
          doc.grid.push_back(as_double(element(*gc, i)));
      }
    } else {
      required(*pc, "kind").fail("unknown payload kind \"" + kind + "\"");
    }
  }
  return doc;
}

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json real_vector_to_json(const RealVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  return as_matrix(Cursor{&j, path});
}

}  // namespace covkit::cli
