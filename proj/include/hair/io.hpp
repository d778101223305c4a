#pragma once

#include <iosfwd>
#include <string>

#include "hair/density.hpp"
#include "hair/quadtree.hpp"
#include "hair/resampling.hpp"
#include "hair/synth_oracle.hpp"
#include "hair/types.hpp"

// JSON interchange files. Every file carries "format_version": "1" and a
// "kind" tag; readers reject other versions and mismatched kinds. All
// failures throw ValidationError naming the file position or field.
namespace hair::io {

inline constexpr const char* kFormatVersion = "1";

// Boxes may be written either as {"x","y","w","h"} or as "bbox": [x, y, w, h]
// (top-left origin). Loading validates the dataset.
CameraDataset load_dataset(const std::string& path);
CameraDataset parse_dataset(const std::string& text);
std::string dump_dataset(const CameraDataset& dataset);
void save_dataset(const CameraDataset& dataset, const std::string& path);

RoadSet load_roads(const std::string& path);
RoadSet parse_roads(const std::string& text);
std::string dump_roads(const RoadSet& roads);
void save_roads(const RoadSet& roads, const std::string& path);

// Loading re-derives each leaf rectangle from its path and rejects files
// where they disagree.
Hair load_hair(const std::string& path);
Hair parse_hair(const std::string& text);
std::string dump_hair(const Hair& hair);
void save_hair(const Hair& hair, const std::string& path);

SweepGrid load_sweep(const std::string& path);
SweepGrid parse_sweep(const std::string& text);
std::string dump_sweep(const SweepGrid& grid);
void save_sweep(const SweepGrid& grid, const std::string& path);

// Sweep configuration file (kind "sweep_config").
SweepConfig load_sweep_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& text);
std::string dump_sweep_config(const SweepConfig& cfg);

// Synthetic camera description (kind "synth_spec").
SynthSpec load_synth_spec(const std::string& path);
SynthSpec parse_synth_spec(const std::string& text);
std::string dump_synth_spec(const SynthSpec& spec);
void save_synth_spec(const SynthSpec& spec, const std::string& path);

std::string dump_rap_config(const RapConfig& cfg);

// Tab-separated "N  d0  rmse" rows under one header row.
void write_sweep_table(const SweepGrid& grid, std::ostream& out);

// Tab-separated columns image_id, scope, observed, predicted, error with one
// header row, followed by one "RMSE" row per scope whose error column holds
// that scope's RMSE and whose observed/predicted columns are empty.
void write_density_report(const DensityReport& report, std::ostream& out);
void save_density_report(const DensityReport& report, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace hair::io
