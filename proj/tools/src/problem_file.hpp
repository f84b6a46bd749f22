#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "congru/congruence.hpp"
#include "congru/lattice.hpp"
#include "congru/probe.hpp"

namespace congru::cli {

/// Raw `key = value` pairs per section, with source lines for messages.
struct Section {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::pair<std::string, int>>> entries;
  std::optional<std::pair<std::string, int>> get(const std::string& key) const;
};

struct TargetSpec {
  AugmentedAlgebra algebra;
  std::vector<Poly> images;  // one per source variable, in the target ring
};

struct ProblemFile {
  std::string path;
  Dvr dvr = Dvr::p_adic(3);
  std::optional<AugmentedAlgebra> algebra;
  std::vector<NamedModule> modules;
  std::vector<PolyMatrix> resolution;
  std::optional<LatticeSplit> lattice;
  std::optional<Matrix> pairing;
  std::optional<TargetSpec> target;
};

/// Throws Error(ParseError) with `path:line:` prefixes; errors raised while
/// building algebras or modules keep their own code.
ProblemFile parse_problem(const std::string& text, const std::string& path, const Limits& limits = {});
ProblemFile load_problem(const std::string& path, const Limits& limits = {});

/// "[a, b; c, d]" -> rows of entry strings.
std::vector<std::vector<std::string>> split_matrix(const std::string& text);

}  // namespace congru::cli
