#include "hair/render.hpp"

#include <iomanip>
#include <sstream>

#include "hair/errors.hpp"
#include "hair/region_eval.hpp"

namespace hair {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void rect_tag(std::ostream& out, const Rect& r, const std::string& style) {
  out << "  <rect x=\"" << r.x << "\" y=\"" << r.y << "\" width=\"" << r.w << "\" height=\"" << r.h
      << "\" " << style << "/>\n";
}

}  // namespace

std::string render_svg(const CameraDataset& dataset, const std::string& image_id,
                       const RenderOptions& options) {
  const ImageRecord* img = dataset.find(image_id);
  if (!img) throw ValidationError("image '" + image_id + "' not found in dataset");

  RapConfig cfg;
  cfg.iou_threshold = options.iou_threshold;
  const ImageMatch m = match_region_image(img->ground_truth, img->detections, cfg);
  std::vector<bool> gt_hit(img->ground_truth.size(), false);
  for (int g : m.matched_gt)
    if (g >= 0) gt_hit[std::size_t(g)] = true;

  std::ostringstream out;
  out << std::setprecision(10);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\""
      << dataset.width << "\" height=\"" << dataset.height << "\" viewBox=\"0 0 " << dataset.width << ' '
      << dataset.height << "\">\n";
  out << "  <title>" << escape(dataset.camera_id) << " / " << escape(image_id) << "</title>\n";
  if (options.background)
    out << "  <image xlink:href=\"" << escape(*options.background) << "\" x=\"0\" y=\"0\" width=\""
        << dataset.width << "\" height=\"" << dataset.height << "\"/>\n";
  else
    rect_tag(out, dataset.extent(), "fill=\"#f4f4f4\" stroke=\"none\"");

  if (options.hair) {
    out << "  <g id=\"hair\">\n";
    for (const auto& leaf : options.hair->leaves)
      rect_tag(out, leaf.rect, "fill=\"#d62728\" fill-opacity=\"0.35\" stroke=\"#d62728\" stroke-width=\"1\"");
    out << "  </g>\n";
  }

  if (options.roads) {
    out << "  <g id=\"roads\" fill=\"none\" stroke=\"#7f7f7f\" stroke-width=\"2\">\n";
    for (const auto& road : options.roads->roads) {
      out << "    <polyline points=\"";
      for (std::size_t i = 0; i < road.vertices.size(); ++i)
        out << (i ? " " : "") << road.vertices[i].x << ',' << road.vertices[i].y;
      out << "\"/>\n";
    }
    out << "  </g>\n";
  }

  out << "  <g id=\"ground_truth\">\n";
  for (std::size_t g = 0; g < img->ground_truth.size(); ++g) {
    if (gt_hit[g])
      rect_tag(out, img->ground_truth[g].rect(),
               "class=\"tp\" fill=\"#1f77b4\" fill-opacity=\"0.8\" stroke=\"#1f77b4\" stroke-width=\"1.5\"");
    else
      rect_tag(out, img->ground_truth[g].rect(),
               "class=\"fn\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"");
  }
  out << "  </g>\n";

  out << "  <g id=\"false_positives\">\n";
  for (std::size_t d = 0; d < img->detections.size(); ++d)
    if (!m.is_tp[d])
      rect_tag(out, img->detections[d].rect(),
               "class=\"fp\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"");
  out << "  </g>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace hair
