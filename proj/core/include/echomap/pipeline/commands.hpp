#ifndef ECHOMAP_PIPELINE_COMMANDS_HPP
#define ECHOMAP_PIPELINE_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "echomap/pipeline/config.hpp"

namespace echomap::pipeline {

// Process exit codes, one per failure class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // bad configuration / usage
inline constexpr int kExitInputFormat = 2; // unreadable or malformed files
inline constexpr int kExitNoSoi = 3;       // no impacts detected
inline constexpr int kExitNumerical = 4;   // numeric solve failed

// Writes audio.wav, trajectory.csv, ground_truth.csv, dataset.bin and
// meta.json for the configured synthetic scenario.
int cmd_synth(const PipelineConfig& cfg, const std::string& out_dir, std::ostream& log);

// Runs filter -> interval segmentation -> SOI detection -> DFT -> FD ->
// pose sync -> FD-map registration. Writes report.csv, taps.csv,
// fd_map.csv, fd_map.ply, segments.bin and meta.json.
int cmd_analyze(const PipelineConfig& cfg, const std::string& wav_path,
                const std::string& pose_path, const std::string& out_dir, std::ostream& log);

// Joint training on a labeled dataset; writes checkpoint.bin and
// metrics.csv, prints held-out accuracy and depth MAE to the log.
int cmd_train(const PipelineConfig& cfg, const std::string& dataset_path,
              const std::string& out_dir, std::ostream& log);

// Shell accumulation over the tap groups of a previous analysis. Writes
// targets.csv, voxels.ply and grid_meta.json. checkpoint_path is required
// when the radius source is "model".
int cmd_backproject(const PipelineConfig& cfg, const std::string& analysis_dir,
                    const std::string& out_dir, const std::string& checkpoint_path,
                    std::ostream& log);

// Threshold between the low-FD and high-FD cluster: the midpoint of the
// largest gap, when that gap spans at least gap_fraction of the value
// range. Returns 0 (nothing classified as subsurface) otherwise.
double auto_fd_threshold(std::vector<double> fd_values, double gap_fraction);

} // namespace echomap::pipeline

#endif
