#include "echomap/pipeline/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include <json.hpp>

#include "echomap/errors.hpp"
#include "echomap/imaging/backprojection.hpp"
#include "echomap/imaging/fd_map.hpp"
#include "echomap/imaging/sync.hpp"
#include "echomap/inference/checkpoint.hpp"
#include "echomap/inference/train.hpp"
#include "echomap/io/csv.hpp"
#include "echomap/io/dataset.hpp"
#include "echomap/io/exports.hpp"
#include "echomap/io/ply.hpp"
#include "echomap/io/trajectory.hpp"
#include "echomap/io/wav.hpp"
#include "echomap/rng.hpp"
#include "echomap/signal/filter.hpp"
#include "echomap/signal/fourier.hpp"
#include "echomap/signal/mel.hpp"
#include "echomap/signal/soi.hpp"

namespace echomap::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputFormat;
    } catch (const NumericalFailureError& e) {
        log << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

signal::SoiOptions soi_options(const PipelineConfig& cfg) {
    signal::SoiOptions opts;
    opts.threshold = cfg.signal.soi_threshold;
    opts.pre_seconds = cfg.signal.pre_window;
    opts.post_seconds = cfg.signal.post_window;
    return opts;
}

// filter -> interval scan -> SOI detection, dropping SOIs outside the
// relevant (non-rejected) intervals.
std::vector<signal::SignalOfInterest> detect_pipeline_sois(const PipelineConfig& cfg,
                                                           const signal::AudioTrace& raw,
                                                           std::ostream& log) {
    const signal::AudioTrace filtered = signal::low_pass_filter(raw, cfg.signal.cutoff_hz);
    const signal::IntervalSegmentation seg =
        signal::segment_intervals(filtered, cfg.signal.interval_seconds,
                                  cfg.signal.relevance_threshold, cfg.signal.outlier_sigma);
    for (const auto& rejected : seg.rejected_intervals)
        log << "note: rejected interval [" << rejected.range.begin << ", "
            << rejected.range.end << ") - " << rejected.reason << '\n';

    std::vector<signal::SignalOfInterest> sois = signal::detect_soi(filtered, soi_options(cfg));
    if (seg.trace_too_short) {
        log << "warning: trace shorter than one interval; skipping interval filter\n";
        return sois;
    }

    std::vector<signal::SignalOfInterest> kept;
    for (auto& soi : sois) {
        const double rel = soi.t_start - filtered.start_time;
        const auto idx = static_cast<std::size_t>(std::llround(rel * filtered.sample_rate));
        if (seg.contains(idx)) kept.push_back(std::move(soi));
    }
    return kept;
}

imaging::SyncOptions sync_options(const PipelineConfig& cfg) {
    imaging::SyncOptions opts;
    opts.edge_tolerance = cfg.imaging.sync_edge_tolerance;
    opts.group_distance = cfg.imaging.tap_group_distance;
    opts.sensor_offset = cfg.imaging.sensor_offset;
    return opts;
}

imaging::PeakBand peak_band(const PipelineConfig& cfg) {
    return {cfg.imaging.peak_band_low, cfg.imaging.peak_band_high};
}

std::string label_to_csv(signal::RegionLabel label) { return signal::to_string(label); }

struct TapRow {
    int soi_index = -1;
    int group_id = -1;
    double t_start = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double fd = 0.0;
    double psd = 0.0;
    std::string label;
    double f_peak = std::numeric_limits<double>::quiet_NaN();
    double bin_width = 0.0;
};

void save_taps_csv(const std::string& path, const std::vector<TapRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("taps: cannot write " + path);
    out << "soi_index,group_id,t_start,x,y,z,fd,psd,label,f_peak,bin_width\n";
    for (const auto& r : rows) {
        out << r.soi_index << ',' << r.group_id << ',' << io::format_double(r.t_start) << ','
            << io::format_double(r.position.x()) << ',' << io::format_double(r.position.y())
            << ',' << io::format_double(r.position.z()) << ',' << io::format_double(r.fd) << ','
            << io::format_double(r.psd) << ',' << r.label << ',' << io::format_double(r.f_peak)
            << ',' << io::format_double(r.bin_width) << '\n';
    }
    if (!out) throw IoError("taps: write failed for " + path);
}

std::vector<TapRow> load_taps_csv(const std::string& path) {
    const auto lines = io::read_lines(path);
    if (lines.empty() ||
        lines[0] != "soi_index,group_id,t_start,x,y,z,fd,psd,label,f_peak,bin_width")
        throw IoError("taps: missing or wrong header in " + path);

    std::vector<TapRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io::split_csv_line(lines[i]);
        const std::string ctx = path + ":" + std::to_string(i + 1);
        if (f.size() != 11)
            throw IoError(ctx + ": expected 11 fields, got " + std::to_string(f.size()));
        TapRow r;
        r.soi_index = static_cast<int>(io::parse_long(f[0], ctx));
        r.group_id = static_cast<int>(io::parse_long(f[1], ctx));
        r.t_start = io::parse_double(f[2], ctx);
        r.position = {io::parse_double(f[3], ctx), io::parse_double(f[4], ctx),
                      io::parse_double(f[5], ctx)};
        r.fd = io::parse_double(f[6], ctx);
        r.psd = io::parse_double(f[7], ctx);
        r.label = f[8];
        r.f_peak = io::parse_double(f[9], ctx);
        r.bin_width = io::parse_double(f[10], ctx);
        rows.push_back(r);
    }
    return rows;
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

} // namespace

double auto_fd_threshold(std::vector<double> fd_values, double gap_fraction) {
    if (fd_values.size() < 2) return 0.0;
    std::sort(fd_values.begin(), fd_values.end());
    const double range = fd_values.back() - fd_values.front();
    if (range <= 0.0) return 0.0;

    double best_gap = 0.0;
    double split = 0.0;
    for (std::size_t i = 1; i < fd_values.size(); ++i) {
        const double gap = fd_values[i] - fd_values[i - 1];
        if (gap > best_gap) {
            best_gap = gap;
            split = 0.5 * (fd_values[i] + fd_values[i - 1]);
        }
    }
    return best_gap >= gap_fraction * range ? split : 0.0;
}

int cmd_synth(const PipelineConfig& cfg, const std::string& out_dir, std::ostream& log) {
    return guarded(log, [&]() {
        ensure_dir(out_dir);
        synth::ScenarioConfig sc = cfg.scenario;
        sc.seed = cfg.seed;
        const synth::Scenario scenario = synth::generate_scenario(sc);

        const fs::path out(out_dir);
        io::save_wav((out / "audio.wav").string(), scenario.audio);
        io::save_trajectory((out / "trajectory.csv").string(), scenario.trajectory);

        {
            std::ofstream gt(out / "ground_truth.csv");
            if (!gt) throw IoError("cannot write " + (out / "ground_truth.csv").string());
            gt << "location_index,x,y,z,has_pipe_below,nearest_pipe_distance,num_impacts\n";
            for (std::size_t k = 0; k < scenario.truth.locations.size(); ++k) {
                const auto& loc = scenario.truth.locations[k];
                gt << k << ',' << io::format_double(loc.position.x()) << ','
                   << io::format_double(loc.position.y()) << ','
                   << io::format_double(loc.position.z()) << ',' << (loc.has_pipe_below ? 1 : 0)
                   << ',' << io::format_double(loc.nearest_pipe_distance) << ','
                   << loc.num_impacts << '\n';
            }
        }

        // dataset: run the signal chain on the generated audio and join the
        // detected SOIs to impacts by time
        const auto sois = detect_pipeline_sois(cfg, scenario.audio, log);
        if (sois.size() != scenario.truth.impact_times.size())
            log << "warning: detected " << sois.size() << " SOIs for "
                << scenario.truth.impact_times.size() << " impacts\n";

        io::Dataset dataset;
        dataset.rows = cfg.signal.mel.bands;
        dataset.cols = cfg.signal.mel.frames_per_segment;
        for (std::size_t i = 0; i < sois.size(); ++i) {
            // nearest impact by time
            std::size_t best = 0;
            double best_dt = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < scenario.truth.impact_times.size(); ++k) {
                const double dt = std::abs(scenario.truth.impact_times[k] - sois[i].t_start);
                if (dt < best_dt) {
                    best_dt = dt;
                    best = k;
                }
            }
            const auto& truth =
                scenario.truth.locations[static_cast<std::size_t>(
                    scenario.truth.impact_location[best])];
            const auto segments =
                signal::mel_segments(sois[i], scenario.audio.sample_rate, cfg.signal.mel);
            for (const auto& seg : segments) {
                io::DatasetRecord rec;
                rec.soi_index = static_cast<int>(i);
                rec.values = seg.values;
                rec.pipe_label = truth.has_pipe_below ? 1 : 0;
                if (std::isfinite(truth.nearest_pipe_distance))
                    rec.depth = truth.nearest_pipe_distance;
                dataset.records.push_back(std::move(rec));
            }
        }
        io::save_dataset((out / "dataset.bin").string(), dataset);

        json meta;
        meta["locations"] = scenario.truth.locations.size();
        meta["impacts"] = scenario.truth.impact_times.size();
        meta["duration_seconds"] = scenario.audio.duration();
        meta["sois_detected"] = sois.size();
        meta["dataset_records"] = dataset.records.size();
        write_json_file((out / "meta.json").string(), meta);

        log << "synth: " << scenario.truth.locations.size() << " locations, "
            << scenario.truth.impact_times.size() << " impacts, "
            << io::format_double(scenario.audio.duration()) << " s audio, "
            << dataset.records.size() << " dataset records\n";
        return kExitOk;
    });
}

int cmd_analyze(const PipelineConfig& cfg, const std::string& wav_path,
                const std::string& pose_path, const std::string& out_dir, std::ostream& log) {
    return guarded(log, [&]() {
        ensure_dir(out_dir);
        const fs::path out(out_dir);

        io::LoadedWav wav = io::load_wav(wav_path);
        for (const auto& w : wav.warnings) log << "warning: " << w << '\n';
        const auto trajectory = io::load_trajectory(pose_path);

        const auto sois = detect_pipeline_sois(cfg, wav.trace, log);
        if (sois.empty()) {
            log << "error: no signals of interest detected in " << wav_path << '\n';
            return kExitNoSoi;
        }

        const auto sync = imaging::sync_measurements(sois, trajectory, sync_options(cfg));
        for (const auto& u : sync.unmatched)
            log << "warning: SOI " << u.soi_index << " at t=" << io::format_double(u.t_start)
                << " unmatched: " << u.reason << '\n';
        if (sync.measurements.empty()) {
            log << "error: no SOI could be matched to the trajectory\n";
            return kExitNoSoi;
        }

        double fd_threshold = cfg.imaging.fd_threshold;
        if (fd_threshold <= 0.0) {
            std::vector<double> fds;
            fds.reserve(sync.measurements.size());
            for (const auto& m : sync.measurements) fds.push_back(m.fd_value);
            fd_threshold = auto_fd_threshold(std::move(fds), cfg.imaging.fd_gap_fraction);
        }

        const auto fd_map = imaging::register_fd_map(sync.measurements, fd_threshold);
        io::save_fd_map_csv((out / "fd_map.csv").string(), fd_map);
        io::save_fd_map_ply((out / "fd_map.ply").string(), fd_map);

        // per-SOI report
        {
            std::ofstream report(out / "report.csv");
            if (!report) throw IoError("cannot write " + (out / "report.csv").string());
            report << "soi_index,t_start,fd,psd,label\n";
            for (const auto& m : sync.measurements) {
                report << m.soi_index << ',' << io::format_double(m.soi.t_start) << ','
                       << io::format_double(m.fd_value) << ',' << io::format_double(m.psd_value)
                       << ','
                       << label_to_csv(signal::classify_region(m.fd_value, fd_threshold))
                       << '\n';
            }
        }

        // tap table with group ids and spectral peaks
        std::vector<int> group_of(sync.measurements.size(), -1);
        for (std::size_t g = 0; g < sync.groups.size(); ++g)
            for (int idx : sync.groups[g].measurement_indices)
                group_of[static_cast<std::size_t>(idx)] = static_cast<int>(g);

        std::vector<TapRow> rows;
        rows.reserve(sync.measurements.size());
        for (std::size_t i = 0; i < sync.measurements.size(); ++i) {
            const auto& m = sync.measurements[i];
            TapRow r;
            r.soi_index = m.soi_index;
            r.group_id = group_of[i];
            r.t_start = m.soi.t_start;
            r.position = m.position;
            r.fd = m.fd_value;
            r.psd = m.psd_value;
            r.label = label_to_csv(signal::classify_region(m.fd_value, fd_threshold));
            try {
                r.f_peak = imaging::peak_frequency(m.spectrum, peak_band(cfg));
            } catch (const NoPeakError&) {
                r.f_peak = std::numeric_limits<double>::quiet_NaN();
            }
            r.bin_width = m.spectrum.bin_width;
            rows.push_back(r);
        }
        save_taps_csv((out / "taps.csv").string(), rows);

        // mel segments for model-based depth prediction
        io::Dataset segments;
        segments.rows = cfg.signal.mel.bands;
        segments.cols = cfg.signal.mel.frames_per_segment;
        for (const auto& m : sync.measurements) {
            const auto segs =
                signal::mel_segments(m.soi, wav.trace.sample_rate, cfg.signal.mel);
            for (const auto& seg : segs) {
                io::DatasetRecord rec;
                rec.soi_index = m.soi_index;
                rec.values = seg.values;
                segments.records.push_back(std::move(rec));
            }
        }
        io::save_dataset((out / "segments.bin").string(), segments);

        if (cfg.signal.dump_spectra) {
            ensure_dir((out / "spectra").string());
            for (const auto& m : sync.measurements) {
                char name[32];
                std::snprintf(name, sizeof(name), "soi_%05d.csv", m.soi_index);
                io::save_spectrum_csv((out / "spectra" / name).string(), m.spectrum);
            }
        }

        json meta;
        meta["sois"] = sois.size();
        meta["measurements"] = sync.measurements.size();
        meta["groups"] = sync.groups.size();
        meta["unmatched"] = sync.unmatched.size();
        meta["fd_threshold"] = fd_threshold;
        write_json_file((out / "meta.json").string(), meta);

        log << "analyze: " << sois.size() << " SOIs, " << sync.groups.size()
            << " tap groups, fd_threshold=" << io::format_double(fd_threshold) << '\n';
        return kExitOk;
    });
}

int cmd_train(const PipelineConfig& cfg, const std::string& dataset_path,
              const std::string& out_dir, std::ostream& log) {
    return guarded(log, [&]() {
        ensure_dir(out_dir);
        const fs::path out(out_dir);

        const io::Dataset ds = io::load_dataset(dataset_path);
        if (ds.records.empty()) throw IoError("train: dataset " + dataset_path + " is empty");

        std::vector<inference::TrainingPair> pairs;
        pairs.reserve(ds.records.size());
        for (std::size_t i = 0; i < ds.records.size(); ++i) {
            const auto& rec = ds.records[i];
            if (rec.pipe_label != 0 && rec.pipe_label != 1)
                throw IoError("train: record " + std::to_string(i) + " has no pipe label");
            inference::TrainingPair pair;
            pair.input = rec.values;
            pair.pipe_label = rec.pipe_label;
            if (cfg.inference.depth_supervision == "all") {
                pair.depth = rec.depth;
            } else if (rec.pipe_label == 1) {
                pair.depth = rec.depth;
            }
            pairs.push_back(std::move(pair));
        }

        // seeded 80/20 split
        std::vector<std::size_t> order(pairs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::mt19937_64 split_rng(mix_seed(cfg.seed, 0x73706c6974ull)); // "split"
        deterministic_shuffle(order, split_rng);
        const std::size_t holdout_count = static_cast<std::size_t>(
            std::floor(cfg.inference.holdout_fraction * static_cast<double>(pairs.size())));
        std::vector<inference::TrainingPair> train_set, holdout_set;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i < holdout_count)
                holdout_set.push_back(pairs[order[i]]);
            else
                train_set.push_back(pairs[order[i]]);
        }
        if (train_set.empty()) throw IoError("train: empty training split");

        inference::ModelConfig mc = inference::ModelConfig::standard();
        mc.input_rows = ds.rows;
        mc.input_cols = ds.cols;
        inference::JointModel model = inference::JointModel::seeded(mc, cfg.seed);

        inference::TrainOptions opts;
        opts.epochs = cfg.inference.epochs;
        opts.learning_rate = cfg.inference.learning_rate;
        opts.batch_size = cfg.inference.batch_size;
        opts.seed = cfg.seed;
        opts.weights = {cfg.inference.w0, cfg.inference.w1};
        opts.threads = cfg.inference.threads;
        const inference::TrainResult result = inference::train(model, train_set, opts);
        if (result.class_imbalance_warning)
            log << "warning: training dataset contains a single class\n";

        inference::save_checkpoint((out / "checkpoint.bin").string(), model, cfg.seed);
        {
            std::ofstream metrics(out / "metrics.csv");
            if (!metrics) throw IoError("cannot write " + (out / "metrics.csv").string());
            metrics << "epoch,mean_loss\n";
            for (std::size_t e = 0; e < result.epoch_mean_loss.size(); ++e)
                metrics << e << ',' << io::format_double(result.epoch_mean_loss[e]) << '\n';
        }

        const auto& eval_set = holdout_set.empty() ? train_set : holdout_set;
        if (holdout_set.empty())
            log << "warning: holdout split is empty; evaluating on the training set\n";
        const inference::EvalMetrics metrics = inference::evaluate(
            model, eval_set, {cfg.inference.w0, cfg.inference.w1});
        log << "train: holdout_accuracy=" << io::format_double(metrics.pipe_accuracy)
            << " depth_mae=" << io::format_double(metrics.depth_mae)
            << " depth_samples=" << metrics.depth_count << '\n';
        return kExitOk;
    });
}

int cmd_backproject(const PipelineConfig& cfg, const std::string& analysis_dir,
                    const std::string& out_dir, const std::string& checkpoint_path,
                    std::ostream& log) {
    return guarded(log, [&]() {
        ensure_dir(out_dir);
        const fs::path out(out_dir);
        const fs::path in(analysis_dir);

        const auto rows = load_taps_csv((in / "taps.csv").string());
        if (rows.empty()) throw IoError("backproject: no tap rows in " + analysis_dir);

        // group rows
        std::map<int, std::vector<const TapRow*>> by_group;
        for (const auto& r : rows) by_group[r.group_id].push_back(&r);

        const bool use_model = cfg.imaging.radius_source == "model";
        inference::JointModel model;
        std::map<int, std::vector<const io::DatasetRecord*>> segments_by_soi;
        io::Dataset segments;
        if (use_model) {
            if (checkpoint_path.empty())
                throw InvalidParameterError(
                    "backproject: radius_source=model requires a checkpoint path");
            model = inference::load_checkpoint(checkpoint_path).model;
            segments = io::load_dataset((in / "segments.bin").string());
            for (const auto& rec : segments.records)
                segments_by_soi[rec.soi_index].push_back(&rec);
        }

        const auto aggregation = cfg.inference.aggregate == "max_vote"
                                     ? inference::SegmentAggregation::MaxVote
                                     : inference::SegmentAggregation::Mean;

        std::vector<imaging::TapGroup> groups;
        std::vector<double> radii;
        double max_bin_tolerance = 0.0;
        for (const auto& [gid, members] : by_group) {
            int subsurface = 0;
            for (const auto* m : members)
                if (m->label == "SUBSURFACE_OBJECT") ++subsurface;
            if (2 * subsurface < static_cast<int>(members.size())) continue;

            Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
            for (const auto* m : members) centroid += m->position;
            centroid /= static_cast<double>(members.size());
            centroid.z() = cfg.imaging.surface_z; // impact point on the surface

            double radius = 0.0;
            if (use_model) {
                std::vector<inference::Prediction> soi_preds;
                for (const auto* m : members) {
                    const auto it = segments_by_soi.find(m->soi_index);
                    if (it == segments_by_soi.end()) continue;
                    std::vector<inference::Prediction> seg_preds;
                    for (const auto* rec : it->second)
                        seg_preds.push_back(inference::forward(model, rec->values));
                    if (!seg_preds.empty())
                        soi_preds.push_back(
                            inference::aggregate_predictions(seg_preds, aggregation));
                }
                if (soi_preds.empty()) {
                    log << "warning: group " << gid << " has no segments; skipped\n";
                    continue;
                }
                double depth_sum = 0.0;
                for (const auto& p : soi_preds) depth_sum += p.depth;
                radius = depth_sum / static_cast<double>(soi_preds.size());
            } else {
                double f_sum = 0.0;
                int f_count = 0;
                for (const auto* m : members) {
                    if (std::isfinite(m->f_peak) && m->f_peak > 0.0) {
                        f_sum += m->f_peak;
                        ++f_count;
                    }
                }
                if (f_count == 0) {
                    log << "warning: group " << gid << " has no spectral peak; skipped\n";
                    continue;
                }
                const double f_mean = f_sum / f_count;
                radius = cfg.imaging.wave_speed / (2.0 * f_mean);
                double bin_width = 0.0;
                for (const auto* m : members) bin_width = std::max(bin_width, m->bin_width);
                max_bin_tolerance =
                    std::max(max_bin_tolerance,
                             cfg.imaging.wave_speed * bin_width / (2.0 * f_mean * f_mean));
            }
            if (radius <= 0.0) {
                log << "warning: group " << gid << " produced a nonpositive radius; skipped\n";
                continue;
            }
            imaging::TapGroup group;
            group.centroid = centroid;
            groups.push_back(group);
            radii.push_back(radius);
        }

        const std::string& source = cfg.imaging.radius_source;
        if (groups.empty()) {
            log << "warning: no taps labeled SUBSURFACE_OBJECT; writing empty target list\n";
            std::ofstream targets(out / "targets.csv");
            if (!targets) throw IoError("cannot write " + (out / "targets.csv").string());
            targets << "x,y,z,score,radius_source\n";
            io::save_ply((out / "voxels.ply").string(), {});
            return kExitOk;
        }

        // grid around the used tap groups
        Eigen::Vector3d lo = groups.front().centroid;
        Eigen::Vector3d hi = lo;
        for (const auto& g : groups) {
            lo = lo.cwiseMin(g.centroid);
            hi = hi.cwiseMax(g.centroid);
        }
        const double margin = cfg.imaging.grid_margin;
        const double res = cfg.imaging.grid_resolution;
        const Eigen::Vector3d origin(lo.x() - margin, lo.y() - margin,
                                     cfg.imaging.surface_z - cfg.imaging.grid_depth);
        const Eigen::Vector3i dims(
            std::max(1, static_cast<int>(std::ceil((hi.x() + margin - origin.x()) / res))),
            std::max(1, static_cast<int>(std::ceil((hi.y() + margin - origin.y()) / res))),
            std::max(1, static_cast<int>(std::ceil(cfg.imaging.grid_depth / res))));

        double shell_tolerance = cfg.imaging.shell_tolerance;
        if (shell_tolerance <= 0.0) shell_tolerance = std::max(res, max_bin_tolerance);

        imaging::BackProjectOptions bp_opts;
        bp_opts.weighting = cfg.imaging.shell_weighting == "gaussian"
                                ? imaging::ShellWeighting::Gaussian
                                : imaging::ShellWeighting::Binary;
        imaging::VoxelGrid grid = imaging::back_project(
            groups, radii, imaging::VoxelGrid::create(origin, res, dims), shell_tolerance,
            bp_opts);

        const auto targets = imaging::extract_targets(grid, cfg.imaging.target_fraction);
        {
            std::ofstream tf(out / "targets.csv");
            if (!tf) throw IoError("cannot write " + (out / "targets.csv").string());
            tf << "x,y,z,score,radius_source\n";
            for (const auto& t : targets) {
                const auto clamp_idx = [&](double coord, double org, int dim) {
                    const int i = static_cast<int>(std::floor((coord - org) / res));
                    return std::clamp(i, 0, dim - 1);
                };
                const double score = grid.at(clamp_idx(t.x(), origin.x(), dims.x()),
                                             clamp_idx(t.y(), origin.y(), dims.y()),
                                             clamp_idx(t.z(), origin.z(), dims.z()));
                tf << io::format_double(t.x()) << ',' << io::format_double(t.y()) << ','
                   << io::format_double(t.z()) << ',' << io::format_double(score) << ','
                   << source << '\n';
            }
        }
        io::save_voxel_ply((out / "voxels.ply").string(), grid, cfg.imaging.target_fraction);

        json meta;
        meta["origin"] = {origin.x(), origin.y(), origin.z()};
        meta["resolution"] = res;
        meta["dims"] = {dims.x(), dims.y(), dims.z()};
        meta["groups_used"] = groups.size();
        meta["shell_tolerance"] = shell_tolerance;
        meta["radius_source"] = source;
        write_json_file((out / "grid_meta.json").string(), meta);

        log << "backproject: " << groups.size() << " groups, " << targets.size()
            << " targets, radius_source=" << source << '\n';
        return kExitOk;
    });
}

} // namespace echomap::pipeline
