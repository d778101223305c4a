#include "hair/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hair/density.hpp"
#include "hair/errors.hpp"
#include "hair/io.hpp"
#include "hair/quadtree.hpp"
#include "hair/render.hpp"
#include "hair/resampling.hpp"
#include "hair/synth_oracle.hpp"

namespace hair::cli {

namespace {

using json = nlohmann::ordered_json;

// "all", a leading count, or a comma-separated id list. "holdout" selects
// every image not listed in `exclude`.
std::vector<std::string> select_images(const CameraDataset& d, const std::string& spec,
                                       const std::vector<std::string>* exclude = nullptr) {
  std::vector<std::string> ids;
  if (spec == "all") {
    for (const auto& img : d.images) ids.push_back(img.image_id);
    return ids;
  }
  if (spec == "holdout") {
    if (!exclude) throw ValidationError("'holdout' needs a HAIR file");
    std::set<std::string> skip(exclude->begin(), exclude->end());
    for (const auto& img : d.images)
      if (!skip.count(img.image_id)) ids.push_back(img.image_id);
    if (ids.empty()) throw ValidationError("no holdout images remain");
    return ids;
  }
  if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
    const unsigned long n = std::stoul(spec);
    if (n == 0 || n > d.images.size())
      throw ValidationError("image count " + spec + " out of range (dataset has " +
                            std::to_string(d.images.size()) + ")");
    for (unsigned long i = 0; i < n; ++i) ids.push_back(d.images[i].image_id);
    return ids;
  }
  std::stringstream ss(spec);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) {
      if (!d.find(id)) throw ValidationError("unknown image_id '" + id + "'");
      ids.push_back(id);
    }
  if (ids.empty()) throw ValidationError("no images selected");
  return ids;
}

std::vector<ImageRecord> records(const CameraDataset& d, const std::vector<std::string>& ids) {
  std::vector<ImageRecord> out;
  for (const auto& id : ids) out.push_back(*d.find(id));
  return out;
}

int env_threads() {
  if (const char* v = std::getenv("HAIR_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

void log_config(std::ostream& err, const std::string& command, const json& snapshot) {
  err << "hair " << command << " config: " << snapshot.dump() << '\n';
}

json rap_snapshot(const RapConfig& cfg) { return json::parse(io::dump_rap_config(cfg)); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-accuracy identification regions for fixed traffic cameras", "hair"};
  app.require_subcommand(1);

  // synth
  std::string spec_path, out_path;
  int n_images = 0;
  std::optional<std::uint64_t> seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic camera dataset");
  synth->add_option("--spec", spec_path, "Synthetic spec file, or 'builtin:degraded'")->required();
  synth->add_option("--images", n_images, "Number of images")->required()->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", seed, "Overrides the spec seed");
  synth->add_option("--out", out_path, "Output dataset file")->required();

  // identify
  std::string dataset_path, images_spec = "all", convention = "counted", policy = "exclude";
  double a0 = 0.75, iou_threshold = 0.5;
  int max_depth = 0;
  std::string trace_path;
  auto* identify = app.add_subcommand("identify", "Identify the HAIR of a camera");
  identify->add_option("--dataset", dataset_path)->required();
  identify->add_option("--images", images_spec, "all | <count> | id1,id2,...");
  identify->add_option("--a0", a0, "RAP threshold")->required();
  identify->add_option("--max-depth", max_depth, "Maximal quadtree depth d0")->required();
  identify->add_option("--convention", convention, "counted | zeroed")->check(CLI::IsMember({"counted", "zeroed"}));
  identify->add_option("--empty-policy", policy, "include | exclude")->check(CLI::IsMember({"include", "exclude"}));
  identify->add_option("--iou", iou_threshold, "IoU threshold for a true positive");
  identify->add_option("--trace", trace_path, "Write the visited-node trace (TSV)");
  identify->add_option("--out", out_path)->required();

  // sweep
  std::string config_path, table_path;
  int workers = 0;
  bool keep_errors = false;
  auto* sweep = app.add_subcommand("sweep", "Resampling sweep over (N, d0)");
  sweep->add_option("--dataset", dataset_path)->required();
  sweep->add_option("--config", config_path, "Sweep config file")->required();
  sweep->add_option("--seed", seed, "Overrides the config seed");
  sweep->add_option("--workers", workers, "Worker threads (default HAIR_THREADS or all cores)");
  sweep->add_flag("--keep-errors", keep_errors, "Store per-iteration errors in the grid file");
  sweep->add_option("--table", table_path, "Also write the N/d0/rmse table here");
  sweep->add_option("--out", out_path)->required();

  // select
  std::string grid_path, n_rule = "candidate";
  double delta_depth = 0.01, delta_n = 0.001;
  auto* select = app.add_subcommand("select", "Choose d0* and N* from a sweep grid");
  select->add_option("--grid", grid_path)->required();
  select->add_option("--delta-depth", delta_depth);
  select->add_option("--delta-n", delta_n);
  select->add_option("--n-rule", n_rule, "candidate | all-k")->check(CLI::IsMember({"candidate", "all-k"}));

  // error
  std::string hair_path;
  bool allow_overlap = false;
  auto* error = app.add_subcommand("error", "HAIR error on evaluation images");
  error->add_option("--dataset", dataset_path)->required();
  error->add_option("--hair", hair_path)->required();
  error->add_option("--images", images_spec, "holdout | all | <count> | id1,id2,...")->required();
  error->add_flag("--allow-overlap", allow_overlap, "Permit images used to identify the HAIR");

  // density
  std::string roads_path;
  auto* density = app.add_subcommand("density", "Traffic density error, full extent vs HAIR");
  density->add_option("--dataset", dataset_path)->required();
  density->add_option("--roads", roads_path)->required();
  density->add_option("--hair", hair_path);
  density->add_option("--images", images_spec, "holdout | all | <count> | id1,id2,...")->required();
  density->add_option("--out", out_path)->required();

  // render
  std::string image_id, background;
  auto* render = app.add_subcommand("render", "SVG overlay of one image");
  render->add_option("--dataset", dataset_path)->required();
  render->add_option("--hair", hair_path);
  render->add_option("--roads", roads_path);
  render->add_option("--image", image_id)->required();
  render->add_option("--background", background, "href of a camera frame to place underneath");
  render->add_option("--out", out_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    out << std::setprecision(17);
    if (synth->parsed()) {
      SynthSpec spec = spec_path == "builtin:degraded" ? default_degraded_spec() : io::load_synth_spec(spec_path);
      if (seed) spec.seed = *seed;
      log_config(err, "synth", json::parse(io::dump_synth_spec(spec)));
      CameraDataset d = generate_camera(spec, n_images);
      io::save_dataset(d, out_path);
      out << "wrote " << d.images.size() << " images to " << out_path << '\n';
    } else if (identify->parsed()) {
      const CameraDataset d = io::load_dataset(dataset_path);
      RapConfig cfg;
      cfg.a0 = a0;
      cfg.iou_threshold = iou_threshold;
      cfg.zero_recall_mode = parse_zero_recall_mode(convention);
      cfg.empty_region_policy = parse_empty_region_policy(policy);
      cfg.validate();
      const auto ids = select_images(d, images_spec);
      log_config(err, "identify", {{"dataset", dataset_path}, {"images", ids.size()},
                                   {"max_depth", max_depth}, {"rap", rap_snapshot(cfg)}});
      std::vector<TraceEntry> trace;
      const Hair h = identify_hair(d, ids, cfg, max_depth, trace_path.empty() ? nullptr : &trace);
      io::save_hair(h, out_path);
      if (!trace_path.empty()) {
        std::ostringstream t;
        t << std::setprecision(17) << "path\tdepth\trap\tdecision\n";
        for (const auto& e : trace) {
          t << path_to_string(e.path) << '\t' << e.path.size() << '\t';
          if (e.rap) t << *e.rap; else t << "undefined";
          t << '\t' << to_string(e.decision) << '\n';
        }
        io::write_file(trace_path, t.str());
      }
      out << "leaves\t" << h.leaves.size() << '\n';
      for (const auto& leaf : h.leaves) {
        out << (leaf.path.empty() ? "<root>" : path_to_string(leaf.path)) << '\t';
        if (leaf.rap) out << *leaf.rap; else out << "undefined";
        out << '\n';
      }
    } else if (sweep->parsed()) {
      const CameraDataset d = io::load_dataset(dataset_path);
      SweepConfig cfg = io::load_sweep_config(config_path);
      if (seed) cfg.seed = *seed;
      const int threads = workers > 0 ? workers : env_threads();
      log_config(err, "sweep", json::parse(io::dump_sweep_config(cfg)));
      const SweepGrid g = run_sweep(d, cfg, threads, keep_errors);
      io::save_sweep(g, out_path);
      io::write_sweep_table(g, out);
      if (!table_path.empty()) {
        std::ostringstream t;
        io::write_sweep_table(g, t);
        io::write_file(table_path, t.str());
      }
    } else if (select->parsed()) {
      const SweepGrid g = io::load_sweep(grid_path);
      SelectOptions opt{delta_depth, delta_n, n_rule == "all-k" ? NRule::all_larger_k : NRule::candidate_k};
      log_config(err, "select", {{"grid", grid_path}, {"delta_depth", delta_depth},
                                 {"delta_n", delta_n}, {"n_rule", n_rule}});
      const ParameterChoice c = select_parameters(g, opt);
      out << "d0*\t" << c.d0_star << "\nN*\t" << c.n_star << '\n';
    } else if (error->parsed()) {
      const CameraDataset d = io::load_dataset(dataset_path);
      const Hair h = io::load_hair(hair_path);
      const auto ids = select_images(d, images_spec, &h.identification_image_ids);
      log_config(err, "error", {{"dataset", dataset_path}, {"hair", hair_path}, {"images", ids.size()},
                                {"rap", rap_snapshot(h.convention)}});
      const HairError e = hair_error(h, records(d, ids), h.convention, allow_overlap);
      out << "acc1\t" << e.acc1 << "\nacc2\t" << e.acc2 << "\ne\t" << e.e << '\n';
    } else if (density->parsed()) {
      const CameraDataset d = io::load_dataset(dataset_path);
      const RoadSet roads = io::load_roads(roads_path);
      std::optional<Hair> h;
      if (!hair_path.empty()) h = io::load_hair(hair_path);
      const auto ids = select_images(d, images_spec, h ? &h->identification_image_ids : nullptr);
      log_config(err, "density", {{"dataset", dataset_path}, {"roads", roads_path},
                                  {"hair", hair_path}, {"images", ids.size()}});
      const DensityReport r = evaluate_density(d, ids, h ? &*h : nullptr, roads);
      io::save_density_report(r, out_path);
      out << "unit\tvehicles per " << r.unit << '\n';
      out << "full_rmse\t" << r.full_rmse << '\n';
      if (r.hair_rmse) out << "hair_rmse\t" << *r.hair_rmse << '\n';
    } else if (render->parsed()) {
      const CameraDataset d = io::load_dataset(dataset_path);
      std::optional<Hair> h;
      std::optional<RoadSet> roads;
      if (!hair_path.empty()) h = io::load_hair(hair_path);
      if (!roads_path.empty()) roads = io::load_roads(roads_path);
      RenderOptions opt;
      opt.hair = h ? &*h : nullptr;
      opt.roads = roads ? &*roads : nullptr;
      if (!background.empty()) opt.background = background;
      if (h) opt.iou_threshold = h->convention.iou_threshold;
      log_config(err, "render", {{"dataset", dataset_path}, {"image", image_id}});
      io::write_file(out_path, render_svg(d, image_id, opt));
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
  return kOk;
}

}  // namespace hair::cli
