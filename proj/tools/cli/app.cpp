#include "app.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "report.hpp"

#ifndef WEIERLAB_VERSION
#define WEIERLAB_VERSION "0.0.0"
#endif

namespace weierlab::cli {

namespace {

Json error_object(const std::string& code, const std::string& message,
                  const std::string* pointer = nullptr) {
  Json e = {{"code", code}, {"message", message}};
  if (pointer) e["pointer"] = *pointer;
  return {{"error", e}};
}

/// "inf" or a constant expression such as "1", "-i" or "0.5+2*i".
Json value_arg(const std::string& text) {
  if (text == "inf") return "inf";
  MeroExpr e = parse_mero(text);
  if (!e.is_constant()) {
    throw Error(ErrorCode::InvalidArgument, "'" + text + "' is not a constant");
  }
  return to_json(e.constant_value());
}

}  // namespace

const char* version() { return WEIERLAB_VERSION; }

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    RunConfig c = config;
    Node root(c.input, "");
    if (root.has("seed")) {
      int s = root.at("seed").integer();
      if (s < 0) root.at("seed").fail("expected a nonnegative integer");
      c.seed = static_cast<std::uint64_t>(s);
    }
    if (c.jobs < 0) throw Error(ErrorCode::InvalidArgument, "--jobs must be nonnegative");
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + c.out_dir + "': " + ec.message());

    CommandResult res = execute(c);
    Json report = res.report;
    report["command"] = c.command + " " + c.action;
    report["tool"] = {{"name", "weierlab"}, {"version", version()}};
    report["config_hash"] = config_hash(c.input);
    report["input"] = c.input;
    report["seed"] = c.seed;
    report["exit_code"] = res.exit_code;
    std::string path = (std::filesystem::path(c.out_dir) / "report.json").string();
    emit_report(report, path);
    out << path << "\n";
    err << res.summary << "\n";
    return res.exit_code;
  } catch (const SchemaError& e) {
    err << error_object("schema", e.what(), &e.pointer()).dump() << "\n";
  } catch (const Error& e) {
    err << error_object(to_string(e.code()), e.what()).dump() << "\n";
  } catch (const std::exception& e) {
    err << error_object("internal", e.what()).dump() << "\n";
  }
  return kExitError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weierstrass data, curvature estimates and surface synthesis"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = "weierlab-run", cls, f, g;
  int jobs = 1, m = 0, resolution = 0;
  std::int64_t seed = -1;
  double bounded = 0.0;
  std::vector<std::string> omits;

  struct Leaf {
    std::string command, action;
    CLI::App* app;
  };
  std::vector<Leaf> leaves;

  auto add_group = [&](const std::string& name, const std::string& help,
                       const std::vector<std::pair<std::string, std::string>>& actions) {
    CLI::App* group = app.add_subcommand(name, help);
    group->require_subcommand(1);
    for (const auto& [action, desc] : actions) {
      CLI::App* leaf = group->add_subcommand(action, desc);
      leaf->add_option("-c,--config", config_path, "JSON input record");
      leaf->add_option("-o,--out", out_dir, "run directory")->capture_default_str();
      leaf->add_option("-j,--jobs", jobs, "worker threads for mesh construction (0 = all)")
          ->capture_default_str();
      leaf->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
      leaf->add_option("--resolution", resolution, "mesh resolution")
          ->check(CLI::PositiveNumber);
      leaves.push_back({name, action, leaf});
    }
    return group;
  };

  add_group("triple", "Weierstrass m-triples",
            {{"check", "regularity and curvature oracle"}, {"curvature", "density and curvature"}});
  add_group("estimate", "curvature estimates", {{"verify", "sup |K| d^2 against C^2"}});
  add_group("surface", "surface synthesis",
            {{"synth", "synthesize and export a mesh"},
             {"periods", "period residuals"},
             {"singular", "singular locus"}});
  add_group("probe", "normality and completeness probes",
            {{"marty", "spherical gradient sups over a family"},
             {"zalcman", "Zalcman rescaling"},
             {"fujimoto", "Fujimoto ratio"},
             {"completeness", "divergence of truncated lengths"}});
  add_group("example", "worked examples", {{"optimal", "data omitting m + 2 values"}});

  for (auto& leaf : leaves) {
    if (leaf.command == "triple" || leaf.command == "estimate" ||
        (leaf.command == "probe" && leaf.action == "completeness")) {
      leaf.app->add_option("--f", f, "1-form coefficient f");
      leaf.app->add_option("--g", g, "Gauss map g");
      leaf.app->add_option("--m", m, "m")->check(CLI::PositiveNumber);
    }
    if (leaf.command == "estimate") {
      leaf.app->add_option("--bounded", bounded, "property |g| < L")->check(CLI::PositiveNumber);
      leaf.app->add_option("--omits", omits, "omitted values (constants or 'inf')");
    }
    if (leaf.command == "surface") {
      leaf.app->add_option("--class", cls, "minimal, maxface, improper_affine or flat_front");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << error_object("usage", e.what()).dump() << "\n";
    return kExitError;
  }

  RunConfig rc;
  for (const auto& leaf : leaves) {
    if (leaf.app->parsed()) {
      rc.command = leaf.command;
      rc.action = leaf.action;
    }
  }
  rc.out_dir = out_dir;
  rc.jobs = jobs;
  try {
    if (!config_path.empty()) rc.input = load_config(config_path);
    if (!rc.input.is_object()) throw SchemaError("", "config must be an object");
    if (!f.empty()) rc.input["f"] = f;
    if (!g.empty()) rc.input["g"] = g;
    if (m > 0) rc.input["m"] = m;
    if (!cls.empty()) rc.input["class"] = cls;
    if (resolution > 0) rc.input["resolution"] = resolution;
    if (seed >= 0) rc.input["seed"] = seed;
    if (bounded > 0.0 && !omits.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--bounded and --omits are exclusive");
    }
    if (bounded > 0.0) rc.input["property"] = {{"bounded", bounded}};
    if (!omits.empty()) {
      Json list = Json::array();
      for (const auto& v : omits) list.push_back(value_arg(v));
      rc.input["property"] = {{"omits", list}};
    }
  } catch (const SchemaError& e) {
    err << error_object("schema", e.what(), &e.pointer()).dump() << "\n";
    return kExitError;
  } catch (const Error& e) {
    err << error_object(to_string(e.code()), e.what()).dump() << "\n";
    return kExitError;
  }
  return run(rc, out, err);
}

}  // namespace weierlab::cli
