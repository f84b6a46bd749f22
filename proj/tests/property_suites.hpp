#pragma once

#include <functional>
#include <string>
#include <vector>

#include "congru/probe.hpp"

namespace congru::props {

struct Failures {
  std::vector<std::string> messages;
  void check(bool ok, const std::string& what) {
    if (!ok) messages.push_back(what);
  }
};

struct PropertySuite {
  std::string name;
  std::uint64_t seed;
  ProbeOptions options;
  std::function<void(const ProbeInstance&, Failures&)> check;
};

struct SuiteOutcome {
  std::size_t instances = 0;
  std::vector<std::string> failures;  // "instance: message"
};

const std::vector<PropertySuite>& property_suites();

/// Instances cycle over Z_(3), Z_(5) and F_3[[t]].
SuiteOutcome run_suite(const PropertySuite& s, std::size_t instances);

}  // namespace congru::props
