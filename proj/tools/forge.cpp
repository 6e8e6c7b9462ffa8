#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"

using namespace forge;

namespace {

// A spec argument is a file path, or the name of a built-in example.
std::optional<Json> load(const std::string& arg, std::string& error) {
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    try {
      return Json::parse(in);
    } catch (const std::exception& e) {
      error = std::string("InvalidSpec: ") + e.what();
      return std::nullopt;
    }
  }
  if (auto b = builtin_example(arg)) return b;
  error = "IOError: no spec file or built-in example named '" + arg + "'";
  return std::nullopt;
}

int emit(const RunReport& r, const std::string& output) {
  const std::string text = r.to_json().dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    try {
      write_text(output, text);
    } catch (const IOError& e) {
      std::cerr << e.what() << "\n";
      return 3;
    }
  }
  if (!r.error.empty()) std::cerr << r.error << "\n";
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: group actions on graphs, built and audited on finite windows"};
  app.require_subcommand(1);

  PipelineOptions opts;
  std::size_t radius = 0, angle = 0, threshold = 0, max_vertices = 0;
  std::size_t threads = 0;
  bool no_parallel = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--radius", radius, "window radius R");
    sub->add_option("--angle-bound", angle, "angle bound D");
    sub->add_option("--threshold", threshold, "fineness threshold N");
    sub->add_option("--max-vertices", max_vertices, "largest window materialized");
    sub->add_flag("--trust-monomorphisms", opts.trust_monomorphisms, "skip monomorphism certification");
    sub->add_option("--threads", threads, "analysis threads (0: hardware)");
    sub->add_flag("--no-parallel", no_parallel, "run analysis sequentially");
    sub->add_flag("--timings", opts.timings, "record per-step timings");
  };

  std::string spec_arg, output;
  auto* run = app.add_subcommand("run", "run a pipeline spec (file or built-in name)");
  run->add_option("spec", spec_arg)->required();
  run->add_option("-o,--output", output, "write the JSON report here");
  add_common(run);

  auto* verify = app.add_subcommand("verify", "run a spec and report its audits only");
  verify->add_option("spec", spec_arg)->required();
  verify->add_option("-o,--output", output, "write the JSON report here");
  add_common(verify);

  std::string example_name;
  auto* examples = app.add_subcommand("examples", "list built-in examples or print one");
  examples->add_option("name", example_name);

  std::string format = "dot", graph_id, export_path;
  std::size_t export_radius = 3, stab_length = 0;
  auto* exp = app.add_subcommand("export", "run a spec and export a window of one of its graphs");
  exp->add_option("spec", spec_arg)->required();
  exp->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
  exp->add_option("--graph", graph_id, "graph id (default: last graph produced)");
  exp->add_option("--ball-radius", export_radius, "radius of the exported window");
  exp->add_option("--stab-length", stab_length, "stabilizer enumeration length (0: ball radius)");
  exp->add_option("-o,--output", export_path, "output path (default: stdout)");
  add_common(exp);

  CLI11_PARSE(app, argc, argv);

  if (radius) opts.radius = radius;
  if (angle) opts.angle_bound = angle;
  if (threshold) opts.threshold = threshold;
  if (max_vertices) opts.max_vertices = max_vertices;
  set_parallelism(no_parallel ? 1 : threads);

  if (*examples) {
    if (example_name.empty()) {
      for (const auto& e : builtin_examples()) std::cout << e.name << "\t" << e.summary << "\n";
      return 0;
    }
    auto spec = builtin_example(example_name);
    if (!spec) {
      std::cerr << "no built-in example named '" << example_name << "'\n";
      return 3;
    }
    std::cout << spec->dump(2) << "\n";
    return 0;
  }

  std::string error;
  auto spec = load(spec_arg, error);
  if (!spec) {
    std::cerr << error << "\n";
    return 3;
  }

  if (*run || *verify) {
    opts.audits_only = bool(*verify);
    return emit(run_pipeline(*spec, opts), output);
  }

  // export: the spec's own exports are replaced by the requested one
  Json s = *spec;
  s.erase("exports");
  opts.write_exports = false;
  RunReport r = run_pipeline(s, opts);
  if (r.exit_code() >= 2) return emit(r, "");
  if (format == "json" && graph_id.empty()) {
    return emit(r, export_path) == 3 ? 3 : r.exit_code();
  }
  if (graph_id.empty()) {
    for (const auto& st : r.steps)
      if (st.data.contains("vertex_orbits") && st.op != "audit") graph_id = st.id;
    if (graph_id.empty() && s.contains("graphs") && !s["graphs"].empty()) graph_id = s["graphs"].back()["id"];
  }
  if (graph_id.empty()) {
    std::cerr << "InvalidSpec: nothing to export\n";
    return 3;
  }
  Json e{{"graph", graph_id}, {"format", format}, {"radius", export_radius}, {"stab_length", stab_length}};
  const std::string path = export_path.empty() ? (std::filesystem::temp_directory_path() / "forge-export.tmp").string()
                                               : export_path;
  e["path"] = path;
  s["exports"] = Json::array({e});
  opts.write_exports = true;
  RunReport with = run_pipeline(s, opts);
  if (with.exit_code() >= 2) return emit(with, "");
  if (export_path.empty()) {
    std::ifstream in(path);
    std::cout << in.rdbuf();
    std::filesystem::remove(path);
  }
  return with.exit_code();
}
