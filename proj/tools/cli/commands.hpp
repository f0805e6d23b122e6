#pragma once

#include "record.hpp"

#include <cstdint>
#include <string>

namespace confstab::cli {

struct ConstantsOptions {
  int m_first = 4;
  int m_last = 4;
};

struct EllipsoidOptions {
  double a = 1.0;
  int n = 4;
  int grid = 101;
};

struct VerifyOptions {
  std::string case_name;
  int points = 25;
  double step = kDefaultStep;
  double a = 0.8;
  std::uint64_t seed = 0;
};

struct RangeOptions {
  std::string threshold = "auto";
  std::string basis = "both";
};

struct AuditOptions {
  int n = 2;
  int p = 2;
  int q = 1;
  std::int64_t iters = 100000;
  std::uint64_t seed = 0;
};

/// "N" or "N..M"; throws invalid-argument otherwise.
ConstantsOptions parse_m_range(const std::string& text);

RunRecord cmd_constants(const ConstantsOptions& opt);
RunRecord cmd_ellipsoid(const EllipsoidOptions& opt);
RunRecord cmd_verify(const VerifyOptions& opt);
RunRecord cmd_range(const RangeOptions& opt);
RunRecord cmd_audit(const AuditOptions& opt);

}  // namespace confstab::cli
