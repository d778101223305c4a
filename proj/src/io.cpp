#include "hair/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "hair/errors.hpp"

namespace hair::io {

using json = nlohmann::ordered_json;

namespace {

std::string field_path(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

const json& require(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) throw ValidationError("schema: '" + (ctx.empty() ? "<root>" : ctx) + "' must be an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("schema: missing field '" + field_path(ctx, key) + "'");
  return *it;
}

double number(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) throw ValidationError("schema: field '" + field_path(ctx, key) + "' must be a number");
  return v.get<double>();
}

long long integer(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number_integer())
    throw ValidationError("schema: field '" + field_path(ctx, key) + "' must be an integer");
  return v.get<long long>();
}

std::string text(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_string()) throw ValidationError("schema: field '" + field_path(ctx, key) + "' must be a string");
  return v.get<std::string>();
}

const json& array(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_array()) throw ValidationError("schema: field '" + field_path(ctx, key) + "' must be an array");
  return v;
}

std::string at(const std::string& ctx, std::size_t i) { return ctx + "[" + std::to_string(i) + "]"; }

json parse_json(const std::string& content) {
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    throw ValidationError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void check_header(const json& j, const std::string& kind) {
  if (!j.is_object()) throw ValidationError("schema: top level must be an object");
  const std::string version = text(j, "format_version", "");
  if (version != kFormatVersion)
    throw ValidationError("unsupported format_version '" + version + "' (expected " + kFormatVersion + ")");
  const std::string got = text(j, "kind", "");
  if (got != kind) throw ValidationError("expected kind '" + kind + "', found '" + got + "'");
}

json header(const std::string& kind) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- boxes and datasets ----

BBox parse_box(const json& j, const std::string& ctx, bool detection) {
  BBox b;
  if (j.is_object() && j.contains("bbox")) {
    const json& a = array(j, "bbox", ctx);
    if (a.size() != 4) throw ValidationError("schema: field '" + ctx + ".bbox' must hold [x, y, w, h]");
    for (std::size_t i = 0; i < 4; ++i)
      if (!a[i].is_number()) throw ValidationError("schema: field '" + ctx + ".bbox' must hold numbers");
    b = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>(), {}};
  } else {
    b = {number(j, "x", ctx), number(j, "y", ctx), number(j, "w", ctx), number(j, "h", ctx), {}};
  }
  if (detection) b.score = number(j, "score", ctx);
  return b;
}

json box_json(const BBox& b) {
  json j;
  j["x"] = b.x;
  j["y"] = b.y;
  j["w"] = b.w;
  j["h"] = b.h;
  if (b.score) j["score"] = *b.score;
  return j;
}

json rect_json(const Rect& r) {
  json j;
  j["x"] = r.x;
  j["y"] = r.y;
  j["w"] = r.w;
  j["h"] = r.h;
  return j;
}

Rect parse_rect(const json& j, const std::string& ctx) {
  return {number(j, "x", ctx), number(j, "y", ctx), number(j, "w", ctx), number(j, "h", ctx)};
}

int checked_int(long long v, const std::string& what) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ValidationError("schema: field '" + what + "' out of range");
  return int(v);
}

// ---- rap config ----

json rap_json(const RapConfig& cfg) {
  json j;
  j["recall_levels"] = cfg.recall_levels;
  j["a0"] = cfg.a0;
  j["iou_threshold"] = cfg.iou_threshold;
  j["zero_recall_mode"] = to_string(cfg.zero_recall_mode);
  j["empty_region_policy"] = to_string(cfg.empty_region_policy);
  return j;
}

RapConfig parse_rap(const json& j, const std::string& ctx) {
  RapConfig cfg;
  const json& levels = array(j, "recall_levels", ctx);
  cfg.recall_levels.clear();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!levels[i].is_number())
      throw ValidationError("schema: field '" + at(ctx + ".recall_levels", i) + "' must be a number");
    cfg.recall_levels.push_back(levels[i].get<double>());
  }
  cfg.a0 = number(j, "a0", ctx);
  cfg.iou_threshold = number(j, "iou_threshold", ctx);
  cfg.zero_recall_mode = parse_zero_recall_mode(text(j, "zero_recall_mode", ctx));
  cfg.empty_region_policy = parse_empty_region_policy(text(j, "empty_region_policy", ctx));
  cfg.validate();
  return cfg;
}

// ---- points and polylines ----

Point parse_point(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError("schema: field '" + ctx + "' must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_json(const Point& p) { return json::array({p.x, p.y}); }

Polyline parse_polyline(const json& j, const std::string& ctx) {
  Polyline p;
  p.road_id = text(j, "road_id", ctx);
  const json& pts = array(j, "points", ctx);
  for (std::size_t i = 0; i < pts.size(); ++i) p.vertices.push_back(parse_point(pts[i], at(ctx + ".points", i)));
  p.validate();
  return p;
}

json polyline_json(const Polyline& p) {
  json j;
  j["road_id"] = p.road_id;
  json pts = json::array();
  for (const auto& v : p.vertices) pts.push_back(point_json(v));
  j["points"] = pts;
  return j;
}

std::vector<CurvePoint> parse_curve(const json& j, const std::string& key, const std::string& ctx) {
  std::vector<CurvePoint> curve;
  const json& a = array(j, key, ctx);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point p = parse_point(a[i], at(field_path(ctx, key), i));
    curve.push_back({p.x, p.y});
  }
  return curve;
}

json curve_json(const std::vector<CurvePoint>& curve) {
  json a = json::array();
  for (const auto& c : curve) a.push_back(json::array({c.size, c.value}));
  return a;
}

std::vector<int> parse_int_list(const json& j, const std::string& key, const std::string& ctx) {
  std::vector<int> out;
  const json& a = array(j, key, ctx);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number_integer())
      throw ValidationError("schema: field '" + at(field_path(ctx, key), i) + "' must be an integer");
    out.push_back(checked_int(a[i].get<long long>(), at(field_path(ctx, key), i)));
  }
  return out;
}

std::uint64_t parse_seed(const json& j, const std::string& ctx) {
  const json& v = require(j, "seed", ctx);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ValidationError("schema: field '" + field_path(ctx, "seed") + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

json sweep_config_body(const SweepConfig& cfg) {
  json j;
  j["n_values"] = cfg.n_values;
  j["d0_values"] = cfg.d0_values;
  j["iterations"] = cfg.iterations;
  j["holdout_size"] = cfg.holdout_size;
  j["a0"] = cfg.rap.a0;
  j["seed"] = cfg.seed;
  j["rap"] = rap_json(cfg.rap);
  return j;
}

SweepConfig parse_sweep_config_body(const json& j, const std::string& ctx) {
  SweepConfig cfg;
  cfg.n_values = parse_int_list(j, "n_values", ctx);
  cfg.d0_values = parse_int_list(j, "d0_values", ctx);
  cfg.iterations = checked_int(integer(j, "iterations", ctx), field_path(ctx, "iterations"));
  cfg.holdout_size = checked_int(integer(j, "holdout_size", ctx), field_path(ctx, "holdout_size"));
  cfg.seed = parse_seed(j, ctx);
  cfg.rap = parse_rap(require(j, "rap", ctx), field_path(ctx, "rap"));
  if (j.contains("a0")) {
    const double a0 = number(j, "a0", ctx);
    if (a0 != cfg.rap.a0) throw ValidationError("schema: '" + field_path(ctx, "a0") + "' disagrees with rap.a0");
  }
  return cfg;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

// ---- dataset ----

CameraDataset parse_dataset(const std::string& content) {
  const json j = parse_json(content);
  check_header(j, "dataset");
  CameraDataset d;
  d.camera_id = text(j, "camera_id", "");
  d.width = checked_int(integer(j, "width", ""), "width");
  d.height = checked_int(integer(j, "height", ""), "height");
  const json& images = array(j, "images", "");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string ctx = at("images", i);
    ImageRecord img;
    img.image_id = text(images[i], "image_id", ctx);
    const json& gt = array(images[i], "ground_truth", ctx);
    for (std::size_t k = 0; k < gt.size(); ++k)
      img.ground_truth.push_back(parse_box(gt[k], at(ctx + ".ground_truth", k), false));
    const json& det = array(images[i], "detections", ctx);
    for (std::size_t k = 0; k < det.size(); ++k)
      img.detections.push_back(parse_box(det[k], at(ctx + ".detections", k), true));
    d.images.push_back(std::move(img));
  }
  validate_dataset(d);
  return d;
}

std::string dump_dataset(const CameraDataset& d) {
  json j = header("dataset");
  j["camera_id"] = d.camera_id;
  j["width"] = d.width;
  j["height"] = d.height;
  json images = json::array();
  for (const auto& img : d.images) {
    json ij;
    ij["image_id"] = img.image_id;
    json gt = json::array(), det = json::array();
    for (const auto& b : img.ground_truth) gt.push_back(box_json(b));
    for (const auto& b : img.detections) det.push_back(box_json(b));
    ij["ground_truth"] = gt;
    ij["detections"] = det;
    images.push_back(ij);
  }
  j["images"] = images;
  return dump(j);
}

CameraDataset load_dataset(const std::string& path) { return parse_dataset(read_file(path)); }
void save_dataset(const CameraDataset& d, const std::string& path) { write_file(path, dump_dataset(d)); }

// ---- roads ----

RoadSet parse_roads(const std::string& content) {
  const json j = parse_json(content);
  check_header(j, "roads");
  RoadSet r;
  r.unit = text(j, "unit", "");
  r.unit_scale = number(j, "unit_scale", "");
  const json& roads = array(j, "roads", "");
  for (std::size_t i = 0; i < roads.size(); ++i) r.roads.push_back(parse_polyline(roads[i], at("roads", i)));
  if (j.contains("gcps")) {
    const json& g = array(j, "gcps", "");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string ctx = at("gcps", i);
      r.gcps.push_back({parse_point(require(g[i], "px", ctx), ctx + ".px"),
                        parse_point(require(g[i], "world", ctx), ctx + ".world")});
    }
  }
  r.validate();
  return r;
}

std::string dump_roads(const RoadSet& r) {
  json j = header("roads");
  j["unit"] = r.unit;
  j["unit_scale"] = r.unit_scale;
  json roads = json::array();
  for (const auto& p : r.roads) roads.push_back(polyline_json(p));
  j["roads"] = roads;
  if (!r.gcps.empty()) {
    json g = json::array();
    for (const auto& c : r.gcps) {
      json cj;
      cj["px"] = point_json(c.pixel);
      cj["world"] = point_json(c.world);
      g.push_back(cj);
    }
    j["gcps"] = g;
  }
  return dump(j);
}

RoadSet load_roads(const std::string& path) { return parse_roads(read_file(path)); }
void save_roads(const RoadSet& r, const std::string& path) { write_file(path, dump_roads(r)); }

// ---- hair ----

Hair parse_hair(const std::string& content) {
  const json j = parse_json(content);
  check_header(j, "hair");
  Hair h;
  h.camera_id = text(j, "camera_id", "");
  h.width = checked_int(integer(j, "width", ""), "width");
  h.height = checked_int(integer(j, "height", ""), "height");
  if (h.width <= 0 || h.height <= 0) throw ValidationError("hair extent must be positive");
  h.a0 = number(j, "a0", "");
  h.max_depth = checked_int(integer(j, "max_depth", ""), "max_depth");
  h.convention = parse_rap(require(j, "convention", ""), "convention");
  const json& ids = array(j, "identification_image_ids", "");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!ids[i].is_string())
      throw ValidationError("schema: field '" + at("identification_image_ids", i) + "' must be a string");
    h.identification_image_ids.push_back(ids[i].get<std::string>());
  }
  const json& leaves = array(j, "leaves", "");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const std::string ctx = at("leaves", i);
    QuadrantNode node;
    node.path = parse_path(text(leaves[i], "path", ctx));
    node.rect = parse_rect(require(leaves[i], "rect", ctx), ctx + ".rect");
    const json& r = require(leaves[i], "rap", ctx);
    if (!r.is_null()) {
      if (!r.is_number()) throw ValidationError("schema: field '" + ctx + ".rap' must be a number or null");
      node.rap = r.get<double>();
    }
    if (node.depth() > h.max_depth)
      throw ValidationError("integrity: leaf '" + path_to_string(node.path) + "' is deeper than max_depth");
    Rect expected;
    try {
      expected = rect_for_path(h.extent(), node.path);
    } catch (const ComputationError&) {
      throw ValidationError("integrity: leaf '" + path_to_string(node.path) + "' cannot exist in this extent");
    }
    if (!(expected == node.rect))
      throw ValidationError("integrity: leaf '" + path_to_string(node.path) +
                            "' rect does not match its path");
    h.leaves.push_back(std::move(node));
  }
  return h;
}

std::string dump_hair(const Hair& h) {
  json j = header("hair");
  j["camera_id"] = h.camera_id;
  j["width"] = h.width;
  j["height"] = h.height;
  j["a0"] = h.a0;
  j["max_depth"] = h.max_depth;
  j["convention"] = rap_json(h.convention);
  j["identification_image_ids"] = h.identification_image_ids;
  json leaves = json::array();
  for (const auto& leaf : h.leaves) {
    json lj;
    lj["path"] = path_to_string(leaf.path);
    lj["rect"] = rect_json(leaf.rect);
    lj["rap"] = leaf.rap ? json(*leaf.rap) : json(nullptr);
    leaves.push_back(lj);
  }
  j["leaves"] = leaves;
  return dump(j);
}

Hair load_hair(const std::string& path) { return parse_hair(read_file(path)); }
void save_hair(const Hair& h, const std::string& path) { write_file(path, dump_hair(h)); }

// ---- sweep ----

SweepGrid parse_sweep(const std::string& content) {
  const json j = parse_json(content);
  check_header(j, "sweep");
  SweepGrid g;
  g.config = parse_sweep_config_body(require(j, "config", ""), "config");
  if (parse_seed(j, "") != g.config.seed) throw ValidationError("schema: 'seed' disagrees with config.seed");
  const json& rows = array(j, "rows", "");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ctx = at("rows", i);
    const int n = checked_int(integer(rows[i], "N", ctx), ctx + ".N");
    const int d0 = checked_int(integer(rows[i], "d0", ctx), ctx + ".d0");
    const double v = number(rows[i], "rmse", ctx);
    if (!(v >= 0.0)) throw ValidationError("schema: '" + ctx + ".rmse' must be non-negative");
    if (!g.rmse.emplace(std::make_pair(n, d0), v).second)
      throw ValidationError("duplicate sweep cell N=" + std::to_string(n) + " d0=" + std::to_string(d0));
    if (rows[i].contains("errors")) {
      const json& e = array(rows[i], "errors", ctx);
      auto& out = g.errors[{n, d0}];
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (!e[k].is_number()) throw ValidationError("schema: '" + at(ctx + ".errors", k) + "' must be a number");
        out.push_back(e[k].get<double>());
      }
    }
  }
  try {
    g.check_complete();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("incomplete sweep: ") + e.what());
  }
  return g;
}

std::string dump_sweep(const SweepGrid& g) {
  json j = header("sweep");
  j["seed"] = g.config.seed;
  j["config"] = sweep_config_body(g.config);
  json rows = json::array();
  for (const auto& [key, v] : g.rmse) {
    json r;
    r["N"] = key.first;
    r["d0"] = key.second;
    r["rmse"] = v;
    auto it = g.errors.find(key);
    if (it != g.errors.end()) r["errors"] = it->second;
    rows.push_back(r);
  }
  j["rows"] = rows;
  return dump(j);
}

SweepGrid load_sweep(const std::string& path) { return parse_sweep(read_file(path)); }
void save_sweep(const SweepGrid& g, const std::string& path) { write_file(path, dump_sweep(g)); }

SweepConfig parse_sweep_config(const std::string& content) {
  const json j = parse_json(content);
  check_header(j, "sweep_config");
  return parse_sweep_config_body(j, "");
}

std::string dump_sweep_config(const SweepConfig& cfg) {
  json j = header("sweep_config");
  const json body = sweep_config_body(cfg);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return dump(j);
}

SweepConfig load_sweep_config(const std::string& path) { return parse_sweep_config(read_file(path)); }

std::string dump_rap_config(const RapConfig& cfg) { return rap_json(cfg).dump(); }

// ---- synthetic spec ----

SynthSpec parse_synth_spec(const std::string& content) {
  const json j = parse_json(content);
  check_header(j, "synth_spec");
  SynthSpec s;
  s.width = checked_int(integer(j, "width", ""), "width");
  s.height = checked_int(integer(j, "height", ""), "height");
  s.road = parse_polyline(require(j, "road", ""), "road");
  s.road_halfwidth = number(j, "road_halfwidth", "");
  s.vehicles_per_image = number(j, "vehicles_per_image", "");
  s.size_near = number(j, "size_near", "");
  s.size_far = number(j, "size_far", "");
  s.aspect = number(j, "aspect", "");
  s.detect_prob_curve = parse_curve(j, "detect_prob_curve", "");
  s.fp_rate = number(j, "fp_rate", "");
  s.fp_score_max = number(j, "fp_score_max", "");
  s.localization_jitter = number(j, "localization_jitter", "");
  s.score_model = parse_curve(j, "score_model", "");
  s.score_noise = number(j, "score_noise", "");
  s.seed = parse_seed(j, "");
  s.validate();
  return s;
}

std::string dump_synth_spec(const SynthSpec& s) {
  json j = header("synth_spec");
  j["width"] = s.width;
  j["height"] = s.height;
  j["road"] = polyline_json(s.road);
  j["road_halfwidth"] = s.road_halfwidth;
  j["vehicles_per_image"] = s.vehicles_per_image;
  j["size_near"] = s.size_near;
  j["size_far"] = s.size_far;
  j["aspect"] = s.aspect;
  j["detect_prob_curve"] = curve_json(s.detect_prob_curve);
  j["fp_rate"] = s.fp_rate;
  j["fp_score_max"] = s.fp_score_max;
  j["localization_jitter"] = s.localization_jitter;
  j["score_model"] = curve_json(s.score_model);
  j["score_noise"] = s.score_noise;
  j["seed"] = s.seed;
  return dump(j);
}

SynthSpec load_synth_spec(const std::string& path) { return parse_synth_spec(read_file(path)); }
void save_synth_spec(const SynthSpec& s, const std::string& path) { write_file(path, dump_synth_spec(s)); }

// ---- tabular exports ----

void write_sweep_table(const SweepGrid& grid, std::ostream& out) {
  out << "N\td0\trmse\n";
  out << std::setprecision(17);
  for (const auto& [key, v] : grid.rmse) out << key.first << '\t' << key.second << '\t' << v << '\n';
}

void write_density_report(const DensityReport& report, std::ostream& out) {
  out << "image_id\tscope\tobserved\tpredicted\terror\n";
  out << std::setprecision(17);
  for (const auto& r : report.rows)
    out << r.image_id << '\t' << r.scope << '\t' << r.observed << '\t' << r.predicted << '\t' << r.error << '\n';
  out << "RMSE\tfull\t\t\t" << report.full_rmse << '\n';
  if (report.hair_rmse) out << "RMSE\thair\t\t\t" << *report.hair_rmse << '\n';
}

void save_density_report(const DensityReport& report, const std::string& path) {
  std::ostringstream ss;
  write_density_report(report, ss);
  write_file(path, ss.str());
}

}  // namespace hair::io
