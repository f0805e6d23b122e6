#include "app.hpp"

#include "commands.hpp"
#include "confstab/error.hpp"
#include "confstab/version.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace confstab::cli {

namespace {

std::uint64_t env_seed() {
  const char* text = std::getenv("CONFSTAB_SEED");
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::kInvalidArgument, "CONFSTAB_SEED must be an integer");
  return v;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::kInvalidArgument, "cannot open '" + tmp.string() + "'");
    f << text;
    if (!f.flush()) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal stability toolkit", "confstab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string format_text = "json";
  std::string out_path;
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--format", format_text, "json, csv or plot")
      ->check(CLI::IsMember({"json", "csv", "plot"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write the record to FILE instead of stdout");
  app.add_option("--seed", seed_flag, "RNG seed (overrides CONFSTAB_SEED, default 0)");

  std::string m_text = "4";
  auto* constants_cmd = app.add_subcommand("constants", "stability constants per (m, n)");
  constants_cmd->add_option("--m", m_text, "m or m1..m2")->capture_default_str();

  EllipsoidOptions ellipsoid_opt;
  auto* ellipsoid_cmd = app.add_subcommand("ellipsoid", "rescaled second fundamental form on an ellipsoid");
  ellipsoid_cmd->add_option("--a", ellipsoid_opt.a, "semi-axis")->capture_default_str();
  ellipsoid_cmd->add_option("--n", ellipsoid_opt.n, "dimension")->capture_default_str();
  ellipsoid_cmd->add_option("--grid", ellipsoid_opt.grid, "t-grid points")->capture_default_str();

  VerifyOptions verify_opt;
  auto* verify_cmd = app.add_subcommand("verify", "residual check of a transformation law");
  verify_cmd->add_option("--case", verify_opt.case_name, "kind:base")->required();
  verify_cmd->add_option("--points", verify_opt.points)->capture_default_str();
  verify_cmd->add_option("--step", verify_opt.step)->capture_default_str();
  verify_cmd->add_option("--a", verify_opt.a, "ellipsoid semi-axis")->capture_default_str();

  RangeOptions range_opt;
  auto* range_cmd = app.add_subcommand("range", "admissible ellipsoid semi-axes");
  range_cmd->add_option("--threshold", range_opt.threshold, "auto or a positive number")
      ->capture_default_str();
  range_cmd->add_option("--basis", range_opt.basis)
      ->check(CLI::IsMember({"paper", "measured", "both"}))
      ->capture_default_str();

  AuditOptions audit_opt;
  auto* audit_cmd = app.add_subcommand("audit", "random audit of F(II) <= c1 |II|^2");
  audit_cmd->add_option("--n", audit_opt.n)->capture_default_str();
  audit_cmd->add_option("--p", audit_opt.p)->capture_default_str();
  audit_cmd->add_option("--q", audit_opt.q)->capture_default_str();
  audit_cmd->add_option("--iters", audit_opt.iters)->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : env_seed();
    RunRecord rec;
    if (*constants_cmd) {
      rec = cmd_constants(parse_m_range(m_text));
    } else if (*ellipsoid_cmd) {
      rec = cmd_ellipsoid(ellipsoid_opt);
    } else if (*verify_cmd) {
      verify_opt.seed = seed;
      rec = cmd_verify(verify_opt);
    } else if (*range_cmd) {
      rec = cmd_range(range_opt);
    } else {
      audit_opt.seed = seed;
      rec = cmd_audit(audit_opt);
    }
    rec.seed = seed;

    const Format format = format_text == "csv"    ? Format::kCsv
                          : format_text == "plot" ? Format::kPlot
                                                  : Format::kJson;
    std::ostringstream buffer;
    write(buffer, rec, format);
    if (out_path.empty()) {
      out << buffer.str() << std::flush;
    } else {
      write_atomically(out_path, buffer.str());
    }
    for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
    return rec.residuals_pass() ? kExitOk : kExitResidualFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace confstab::cli
