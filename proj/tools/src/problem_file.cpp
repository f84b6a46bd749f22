#include "problem_file.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "congru/error.hpp"

namespace congru::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line) + ": " + msg);
}

// Re-throws parse errors from the polynomial parser with a file position.
template <class F>
auto at(const std::string& path, int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) fail(path, line, e.what());
    throw;
  }
}

bool parse_bool(const std::string& path, int line, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(path, line, "expected a boolean, got '" + v + "'");
}

unsigned long parse_uint(const std::string& path, int line, const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    fail(path, line, "expected a nonnegative integer, got '" + v + "'");
  return std::stoul(v);
}

void check_keys(const Section& s, const std::string& path, const std::set<std::string>& allowed,
                const std::vector<std::string>& extra = {}) {
  for (const auto& [k, v] : s.entries)
    if (!allowed.count(k) && std::find(extra.begin(), extra.end(), k) == extra.end())
      fail(path, v.second, "unknown key '" + k + "' in [" + s.name + "]");
}

PolyMatrix parse_poly_matrix(const PolyRing& r, const std::string& path, int line, const std::string& text,
                             std::optional<std::size_t> rows) {
  const auto cells = split_matrix(text);
  if (cells.empty()) return PolyMatrix(rows.value_or(0), 0);
  PolyMatrix m(cells.size(), cells[0].size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].size() != cells[0].size()) fail(path, line, "ragged matrix");
    for (std::size_t j = 0; j < cells[i].size(); ++j) m(i, j) = at(path, line, [&] { return r.parse(cells[i][j]); });
  }
  if (rows && m.rows() != *rows)
    fail(path, line, "matrix has " + std::to_string(m.rows()) + " rows, expected " + std::to_string(*rows));
  return m;
}

Matrix parse_scalar_matrix(const Dvr& dvr, const std::string& path, int line, const std::string& text) {
  const PolyRing r(dvr, {});
  const auto cells = split_matrix(text);
  if (cells.empty()) fail(path, line, "empty matrix");
  Matrix m(cells.size(), cells[0].size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].size() != cells[0].size()) fail(path, line, "ragged matrix");
    for (std::size_t j = 0; j < cells[i].size(); ++j) m(i, j) = at(path, line, [&] { return r.parse_scalar(cells[i][j]); });
  }
  return m;
}

const std::set<std::string> kAssertionKeys{"codim", "ci", "dimension", "depth", "gorenstein", "cohen_macaulay"};

// Shared by [ring]+[augmentation] and [target].
AugmentedAlgebra build(const Dvr& dvr, const std::string& path, const Section& ring_sec, const Section& aug_sec,
                       const Limits& limits) {
  const auto vars_e = ring_sec.get("vars");
  if (!vars_e) fail(path, ring_sec.line, "[" + ring_sec.name + "] needs 'vars'");
  const PolyRing ring = at(path, vars_e->second, [&] { return PolyRing(dvr, split(vars_e->first, ',')); });
  std::vector<Poly> rels;
  if (const auto r = ring_sec.get("relations"))
    for (const auto& s : split(r->first, ';')) rels.push_back(at(path, r->second, [&] { return ring.parse(s); }));

  std::vector<Scalar> point(ring.nvars(), dvr.zero());
  unsigned codim = 0;
  bool have_codim = false;
  AlgebraAssertions as;
  for (const auto& [k, v] : aug_sec.entries) {
    const auto& [val, line] = v;
    if (const auto i = ring.index_of(k)) {
      point[*i] = at(path, line, [&] { return ring.parse_scalar(val); });
    } else if (k == "codim") {
      codim = static_cast<unsigned>(parse_uint(path, line, val));
      have_codim = true;
    } else if (k == "ci") {
      as.complete_intersection = parse_bool(path, line, val);
    } else if (k == "dimension") {
      as.dimension = static_cast<unsigned>(parse_uint(path, line, val));
    } else if (k == "depth") {
      as.depth = static_cast<unsigned>(parse_uint(path, line, val));
    } else if (k == "gorenstein") {
      as.gorenstein = parse_bool(path, line, val);
    } else if (k == "cohen_macaulay") {
      as.cohen_macaulay = parse_bool(path, line, val);
    } else if (!(aug_sec.name == "target" && (k == "vars" || k == "relations"))) {
      fail(path, line, "unknown key '" + k + "' in [" + aug_sec.name + "]");
    }
  }
  if (!have_codim) fail(path, aug_sec.line, "[" + aug_sec.name + "] needs 'codim'");
  return build_algebra(ring, rels, point, codim, as, limits);
}

}  // namespace

std::optional<std::pair<std::string, int>> Section::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<std::vector<std::string>> split_matrix(const std::string& text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw Error(ErrorCode::ParseError, "matrix must be written as [a, b; c, d]");
  t = t.substr(1, t.size() - 2);
  std::vector<std::vector<std::string>> out;
  for (const auto& row : split(t, ';')) out.push_back(split(row, ','));
  return out;
}

ProblemFile parse_problem(const std::string& text, const std::string& path, const Limits& limits) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(path, line, "malformed section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      for (const auto& sec : sections)
        if (sec.name == name) fail(path, line, "duplicate section [" + name + "]");
      sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(path, line, "expected 'key = value'");
    if (sections.empty()) fail(path, line, "entry outside of a section");
    const std::string key = trim(s.substr(0, eq));
    if (sections.back().get(key)) fail(path, line, "duplicate key '" + key + "'");
    sections.back().entries.push_back({key, {trim(s.substr(eq + 1)), line}});
  }

  auto find = [&](const std::string& name) -> const Section* {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  };
  for (const auto& s : sections) {
    static const std::set<std::string> known{"dvr", "ring", "augmentation", "resolution", "lattice", "target", "map"};
    if (!known.count(s.name) && s.name.rfind("module.", 0) != 0) fail(path, s.line, "unknown section [" + s.name + "]");
  }

  ProblemFile out;
  out.path = path;
  const Section* dvr = find("dvr");
  if (!dvr) fail(path, 1, "missing [dvr] section");
  check_keys(*dvr, path, {"kind", "p", "q"});
  const auto kind = dvr->get("kind");
  const std::string k = kind ? kind->first : "p_adic";
  if (k == "p_adic") {
    const auto p = dvr->get("p");
    if (!p) fail(path, dvr->line, "[dvr] p_adic needs 'p'");
    out.dvr = at(path, p->second, [&] { return Dvr::p_adic(parse_uint(path, p->second, p->first)); });
  } else if (k == "power_series") {
    const auto q = dvr->get("q");
    if (!q) fail(path, dvr->line, "[dvr] power_series needs 'q'");
    out.dvr = at(path, q->second, [&] { return Dvr::power_series(parse_uint(path, q->second, q->first)); });
  } else {
    fail(path, kind->second, "unknown dvr kind '" + k + "'");
  }

  const Section* ring = find("ring");
  const Section* aug = find("augmentation");
  if (ring) {
    check_keys(*ring, path, {"vars", "relations"});
    if (!aug) fail(path, ring->line, "[ring] needs an [augmentation] section");
    out.algebra = build(out.dvr, path, *ring, *aug, limits);
  } else if (aug) {
    fail(path, aug->line, "[augmentation] without [ring]");
  }

  for (const auto& s : sections) {
    if (s.name.rfind("module.", 0) != 0) continue;
    if (!out.algebra) fail(path, s.line, "module sections need [ring]");
    check_keys(s, path, {"generators", "presentation", "residue", "depth", "mcm"});
    const AugmentedAlgebra& a = *out.algebra;
    ModuleAssertions ma;
    if (const auto d = s.get("depth")) ma.depth = static_cast<unsigned>(parse_uint(path, d->second, d->first));
    if (const auto m = s.get("mcm")) ma.maximal_cohen_macaulay = parse_bool(path, m->second, m->first);
    const std::string name = s.name.substr(7);
    if (const auto r = s.get("residue"); r && parse_bool(path, r->second, r->first)) {
      if (s.get("generators") || s.get("presentation")) fail(path, r->second, "residue module takes no presentation");
      FpModule res = FpModule::residue(a);
      out.modules.push_back({name, FpModule(a, 1, res.presentation(), ma)});
      continue;
    }
    const auto g = s.get("generators");
    const std::size_t gens = g ? parse_uint(path, g->second, g->first) : 1;
    PolyMatrix p(gens, 0);
    if (const auto pr = s.get("presentation"))
      p = at(path, pr->second, [&] { return parse_poly_matrix(a.ring(), path, pr->second, pr->first, gens); });
    out.modules.push_back({name, FpModule(a, gens, p, ma)});
  }

  if (const Section* res = find("resolution")) {
    if (!out.algebra) fail(path, res->line, "[resolution] needs [ring]");
    std::size_t rows = 1;
    for (std::size_t i = 1; i <= res->entries.size(); ++i) {
      const auto d = res->get("d" + std::to_string(i));
      if (!d) fail(path, res->line, "[resolution] needs keys d1, d2, ... in order");
      out.resolution.push_back(
          at(path, d->second, [&] { return parse_poly_matrix(out.algebra->ring(), path, d->second, d->first, rows); }));
      rows = out.resolution.back().cols();
    }
  }

  if (const Section* lat = find("lattice")) {
    check_keys(*lat, path, {"basis", "v1", "v2", "pairing"});
    LatticeSplit split;
    for (const char* key : {"basis", "v1", "v2"})
      if (!lat->get(key)) fail(path, lat->line, std::string("[lattice] needs '") + key + "'");
    const auto b = *lat->get("basis");
    split.lattice_basis = parse_scalar_matrix(out.dvr, path, b.second, b.first);
    split.ambient_dim = split.lattice_basis.rows();
    const auto v1 = *lat->get("v1");
    const auto v2 = *lat->get("v2");
    split.v1 = parse_scalar_matrix(out.dvr, path, v1.second, v1.first);
    split.v2 = parse_scalar_matrix(out.dvr, path, v2.second, v2.first);
    if (const auto pg = lat->get("pairing")) out.pairing = parse_scalar_matrix(out.dvr, path, pg->second, pg->first);
    out.lattice = split;
  }

  const Section* tgt = find("target");
  const Section* map = find("map");
  if (tgt) {
    if (!out.algebra) fail(path, tgt->line, "[target] needs [ring]");
    if (!map) fail(path, tgt->line, "[target] needs a [map] section");
    AugmentedAlgebra b = build(out.dvr, path, *tgt, *tgt, limits);
    const AugmentedAlgebra& a = *out.algebra;
    std::vector<Poly> images(a.nvars());
    std::vector<bool> seen(a.nvars(), false);
    for (const auto& [key, v] : map->entries) {
      const auto i = a.ring().index_of(key);
      if (!i) fail(path, v.second, "[map] key '" + key + "' is not a source variable");
      images[*i] = at(path, v.second, [&] { return b.ring().parse(v.first); });
      seen[*i] = true;
    }
    for (std::size_t i = 0; i < a.nvars(); ++i)
      if (!seen[i]) fail(path, map->line, "[map] has no image for " + a.ring().variables()[i]);
    out.target = TargetSpec{b, images};
  } else if (map) {
    fail(path, map->line, "[map] without [target]");
  }
  return out;
}

ProblemFile load_problem(const std::string& path, const Limits& limits) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_problem(ss.str(), path, limits);
}

}  // namespace congru::cli
