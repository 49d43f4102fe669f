#include "lens/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "lens/error.hpp"
#include "lens/model_io.hpp"
#include "lens/rng.hpp"
#include "lens/text.hpp"

namespace lens {

namespace fs = std::filesystem;

PixelSelector make_selector(const Config& cfg, std::size_t rows, std::size_t cols) {
  if (cfg.selector == SelectorMode::Center) {
    return cfg.center;
  }
  return make_random_selection(rows, cols, cfg.random_pixels, cfg.selector_seed);
}

TraverseDataset build_dataset(const EventStream& stream, const Config& cfg, std::string name,
                              DatasetSource source) {
  TraverseDataset ds;
  ds.name = std::move(name);
  ds.source = source;
  if (stream.empty()) {
    throw ValidationError(ds.name + ": event stream is empty");
  }
  const Timestamp origin = stream.events().front().t / cfg.window_us * cfg.window_us;
  const auto count =
      static_cast<std::size_t>((stream.events().back().t - origin) / cfg.window_us + 1);

  const EventStream cropped = cfg.crop ? crop_roi(stream, cfg.roi) : stream;
  auto binned = bin_events(cropped, cfg.window_us, origin, count);
  ds.selector = make_selector(cfg, cropped.geometry().height, cropped.geometry().width);
  for (std::size_t k = 0; k < binned.size(); ++k) {
    EventFrame selected = apply_selector(binned[k], ds.selector);
    ds.inputs.push_back(normalize(selected));
    ds.labels.push_back(k);
    ds.frames.push_back(std::move(selected));
  }
  return ds;
}

TrainResult train_model(const TraverseDataset& reference, const Config& cfg) {
  cfg.validate();
  TrainResult result;
  result.model = init_network(reference.pixels(), cfg.features, reference.places(), cfg.hyper,
                              cfg.seed);
  std::optional<std::uint64_t> shuffle;
  if (cfg.shuffle) shuffle = cfg.shuffle_seed;
  train_feature_layer(result.model, reference.inputs,
                      {cfg.hyper.epochs_if, cfg.hyper.eta_stdp, shuffle}, &result.log);
  train_output_layer(result.model, reference.inputs, reference.labels,
                     {cfg.hyper.epochs_fo, cfg.hyper.eta_itp, shuffle}, cfg.x_force, &result.log);
  return result;
}

std::vector<std::vector<std::uint32_t>> spike_counts(const NetworkModel& model,
                                                     const TraverseDataset& traverse,
                                                     const Config& cfg) {
  if (traverse.pixels() != model.n_in) {
    throw ValidationError("geometry mismatch: " + traverse.name + " yields " +
                          std::to_string(traverse.pixels()) + " input pixels, model expects " +
                          std::to_string(model.n_in));
  }
  std::vector<std::vector<std::uint32_t>> counts;
  counts.reserve(traverse.places());
  for (std::size_t k = 0; k < traverse.inputs.size(); ++k) {
    const auto raster =
        rate_encode(traverse.inputs[k], cfg.timesteps, derive_seed(cfg.rate_seed, k), cfg.dt);
    counts.push_back(infer(model, raster, cfg.iaf));
  }
  return counts;
}

namespace {

LocalizeResult finish_matching(SimilarityMatrix raw, const Config& cfg) {
  LocalizeResult res{std::move(raw), {}, {}};
  res.sequence = sequence_convolve(res.raw, cfg.seq_len);
  res.matches = match_places(res.sequence);
  return res;
}

void save_matches(const fs::path& path, std::span<const MatchResult> matches) {
  std::ostringstream out;
  write_matches(out, matches);
  text::write_file(path, out.str());
}

}  // namespace

LocalizeResult localize(const NetworkModel& model, const TraverseDataset& query, const Config& cfg) {
  cfg.validate();
  const auto counts = spike_counts(model, query, cfg);
  const auto averaged = accumulate_window(counts, cfg.accumulate_bins);
  if (averaged.empty()) {
    throw ValidationError("query has fewer windows than accumulate_bins");
  }
  Grid<double> scores(averaged.size(), model.n_out);
  for (std::size_t q = 0; q < averaged.size(); ++q) {
    std::copy(averaged[q].begin(), averaged[q].end(), scores.row(q).begin());
  }
  return finish_matching(SimilarityMatrix(std::move(scores)), cfg);
}

LocalizeResult match_baseline(const TraverseDataset& reference, const TraverseDataset& query,
                              const Config& cfg) {
  cfg.validate();
  FrameDatabase refs{reference.inputs, reference.selector};
  FrameDatabase queries{query.inputs, query.selector};
  return finish_matching(sad_matrix(refs, queries), cfg);
}

MetricReport evaluate_matrix(const SimilarityMatrix& m, const GroundTruth& gt,
                             std::size_t pr_thresholds, std::string name) {
  MetricReport rep;
  rep.name = std::move(name);
  rep.ns = default_recall_ns(m.references());
  rep.recall = recall_at_n(m, gt, rep.ns);
  rep.pr = pr_curve(m, gt, pr_thresholds);
  rep.pr_auc = auc(rep.pr.points);
  rep.recall_auc = recall_auc(rep.ns, rep.recall);
  return rep;
}

TrainSummary cmd_train(const Config& cfg, const fs::path& events, const fs::path& model_out) {
  const EventStream stream = load_event_file(events);
  const TraverseDataset reference = build_dataset(stream, cfg, events.stem().string());
  const TrainResult trained = train_model(reference, cfg);

  TrainSummary s;
  s.model_path = model_out;
  s.log_path = fs::path(model_out.string() + ".log");
  save_model(model_out, trained.model);
  std::ostringstream log;
  write_training_log(log, trained.log);
  text::write_file(s.log_path, log.str());

  s.n_in = trained.model.n_in;
  s.n_feat = trained.model.n_feat;
  s.n_out = trained.model.n_out;
  s.parameters = trained.model.parameter_count();
  s.model_bytes = fs::file_size(model_out);
  return s;
}

LocalizeResult cmd_localize(const Config& cfg, const fs::path& model_path,
                            const fs::path& query_events, const fs::path& out_dir) {
  const NetworkModel model = load_model(model_path);
  const EventStream stream = load_event_file(query_events);
  const TraverseDataset query = build_dataset(stream, cfg, query_events.stem().string());
  LocalizeResult res = localize(model, query, cfg);
  save_matrix(out_dir / "lens_raw.csv", res.raw);
  save_matrix(out_dir / "lens.csv", res.sequence);
  save_matches(out_dir / "lens_matches.csv", res.matches);
  return res;
}

LocalizeResult cmd_baseline(const Config& cfg, const fs::path& reference_events,
                            const fs::path& query_events, const fs::path& out_dir) {
  const TraverseDataset reference =
      build_dataset(load_event_file(reference_events), cfg, reference_events.stem().string());
  const TraverseDataset query =
      build_dataset(load_event_file(query_events), cfg, query_events.stem().string());
  LocalizeResult res = match_baseline(reference, query, cfg);
  save_matrix(out_dir / "sad_raw.csv", res.raw);
  save_matrix(out_dir / "sad.csv", res.sequence);
  save_matches(out_dir / "sad_matches.csv", res.matches);
  std::ostringstream db;
  for (const auto& f : reference.frames) write_frame(db, f);
  text::write_file(out_dir / "sad_database.txt", db.str());
  return res;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

std::string svg_plot(const std::vector<std::pair<std::string, std::vector<CurvePoint>>>& series,
                     const std::string& x_label, const std::string& y_label, double x_max) {
  const double w = 480;
  const double h = 360;
  const double m = 50;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">" << x_label
    << "</text>\n";
  s << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
    << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& p : series[k].second) {
      const double x = m + (w - 2 * m) * (x_max > 0 ? p.x / x_max : 0.0);
      const double y = h - m - (h - 2 * m) * p.y;
      s << text::format_double(x) << ',' << text::format_double(y) << ' ';
    }
    s << "\"/>\n";
    s << "<text x=\"" << w - m - 100 << "\" y=\"" << m + 15 * (k + 1) << "\" fill=\"" << color
      << "\">" << series[k].first << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace

std::vector<MetricReport> cmd_evaluate(const Config& cfg, const std::vector<fs::path>& matrices,
                                       const std::optional<fs::path>& ground_truth,
                                       const fs::path& out_dir, bool plot) {
  if (matrices.empty()) {
    throw ValidationError("evaluate needs at least one matrix");
  }
  std::vector<SimilarityMatrix> loaded;
  for (const auto& p : matrices) loaded.push_back(load_matrix(p));
  for (const auto& m : loaded) {
    if (m.queries() != loaded.front().queries()) {
      throw ValidationError("matrices disagree on query count");
    }
  }
  const GroundTruth gt = ground_truth ? load_ground_truth(*ground_truth, cfg.tolerance)
                                      : GroundTruth::diagonal(loaded.front().queries(), cfg.tolerance);

  std::vector<MetricReport> reports;
  std::map<std::string, int> seen;
  std::ostringstream summary;
  summary << "matrix,provenance,recall_at_1,recall_auc,pr_auc\n";
  for (std::size_t k = 0; k < loaded.size(); ++k) {
    std::string name = matrices[k].stem().string();
    if (int n = ++seen[name]; n > 1) name += "_" + std::to_string(n);
    MetricReport rep = evaluate_matrix(loaded[k], gt, cfg.pr_thresholds, name);

    std::ostringstream recall;
    write_recall_csv(recall, rep.ns, rep.recall);
    text::write_file(out_dir / name / "recall_at_n.csv", recall.str());
    std::ostringstream pr;
    write_pr_csv(pr, rep.pr);
    text::write_file(out_dir / name / "pr_curve.csv", pr.str());
    summary << name << ',' << loaded[k].provenance() << ','
            << text::format_double(rep.recall_at_1()) << ','
            << text::format_double(rep.recall_auc) << ',' << text::format_double(rep.pr_auc)
            << '\n';
    reports.push_back(std::move(rep));
  }
  text::write_file(out_dir / "summary.csv", summary.str());

  if (plot) {
    std::vector<std::pair<std::string, std::vector<CurvePoint>>> pr_series;
    std::vector<std::pair<std::string, std::vector<CurvePoint>>> recall_series;
    double n_max = 1;
    for (const auto& rep : reports) {
      pr_series.emplace_back(rep.name, rep.pr.points);
      std::vector<CurvePoint> pts;
      for (std::size_t i = 0; i < rep.ns.size(); ++i) {
        pts.push_back({static_cast<double>(rep.ns[i]), rep.recall[i]});
      }
      n_max = std::max(n_max, static_cast<double>(rep.ns.back()));
      recall_series.emplace_back(rep.name, std::move(pts));
    }
    text::write_file(out_dir / "pr_curves.svg", svg_plot(pr_series, "Recall", "Precision", 1.0));
    text::write_file(out_dir / "recall_at_n.svg", svg_plot(recall_series, "N", "Recall@N", n_max));
  }
  return reports;
}

std::string layout_config_text(const SynthLayout& layout) {
  std::ostringstream s;
  s << "# crop and selection settings matching the synthetic layout\n"
    << "crop = true\n"
    << "roi_x0 = " << layout.roi.x0 << '\n'
    << "roi_y0 = " << layout.roi.y0 << '\n'
    << "roi_width = " << layout.roi.width << '\n'
    << "roi_height = " << layout.roi.height << '\n'
    << "selector = center\n"
    << "kernel = " << layout.selection.kernel << '\n'
    << "stride = " << layout.selection.stride << '\n'
    << "offset_y = " << layout.selection.offset_y << '\n'
    << "offset_x = " << layout.selection.offset_x << '\n';
  return s.str();
}

void apply_layout(Config& cfg, const SynthLayout& layout) {
  cfg.crop = true;
  cfg.roi = layout.roi;
  cfg.selector = SelectorMode::Center;
  cfg.center = layout.selection;
}

SynthPaths cmd_synth(const SynthOptions& options, const fs::path& out_dir) {
  const SynthTraverse traverse = synthesize(options);
  SynthPaths paths{out_dir / "reference.events", out_dir / "query.events",
                   out_dir / "ground_truth.csv", out_dir / "synth.cfg"};
  save_event_file(paths.reference, traverse.reference);
  save_event_file(paths.query, traverse.query);
  std::ostringstream gt;
  write_ground_truth(gt, GroundTruth::diagonal(options.places, 0));
  text::write_file(paths.ground_truth, gt.str());
  text::write_file(paths.config, layout_config_text(traverse.layout));
  return paths;
}

}  // namespace lens
