#include "lens/sweep.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "lens/error.hpp"
#include "lens/pipeline.hpp"
#include "lens/text.hpp"

namespace lens {

namespace fs = std::filesystem;

namespace {

std::vector<std::size_t> parse_list(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  for (auto item : text::split(value, ',')) {
    std::uint64_t v = 0;
    if (!text::parse_uint(text::trim(item), v) || v == 0) {
      throw ValidationError("sweep: " + std::string(key) + " expects positive integers");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

SweepGrid parse_sweep_grid(std::string_view body) {
  SweepGrid grid;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(body, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    try {
      if (key == "pixels") {
        grid.pixels = parse_list(key, value);
      } else if (key == "feature_multiplier") {
        grid.feature_multipliers = parse_list(key, value);
      } else if (key == "seq_len") {
        grid.seq_lens = parse_list(key, value);
      } else if (key == "places") {
        std::uint64_t v = 0;
        if (!text::parse_uint(value, v)) throw ValidationError("sweep: places expects an integer");
        grid.places = v;
      } else if (key == "noise") {
        if (!text::parse_double(value, grid.noise)) throw ValidationError("sweep: noise expects a number");
      } else if (key == "synth_seed") {
        if (!text::parse_uint(value, grid.synth_seed)) throw ValidationError("sweep: synth_seed expects an integer");
      } else if (key == "jobs") {
        std::uint64_t v = 0;
        if (!text::parse_uint(value, v) || v == 0) throw ValidationError("sweep: jobs expects a positive integer");
        grid.jobs = v;
      } else if (key == "reference") {
        grid.reference = fs::path(std::string(value));
      } else if (key == "query") {
        grid.query = fs::path(std::string(value));
      } else if (key == "ground_truth") {
        grid.ground_truth = fs::path(std::string(value));
      } else {
        grid.base.set(key, value);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (grid.reference.has_value() != grid.query.has_value()) {
    throw ValidationError("sweep: reference and query must be given together");
  }
  return grid;
}

SweepGrid load_sweep_grid(const fs::path& path) {
  const std::string body = text::read_file(path);
  try {
    return parse_sweep_grid(body);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

namespace {

struct CellInput {
  std::size_t pixels;
  std::size_t multiplier;
};

std::vector<SweepRow> run_cell(const SweepGrid& grid, const CellInput& cell,
                               const EventStream* reference_events,
                               const EventStream* query_events) {
  Config cfg = grid.base;
  cfg.features = cell.pixels * cell.multiplier;

  EventStream ref_stream;
  EventStream query_stream;
  if (reference_events) {
    cfg.selector = SelectorMode::Random;
    cfg.random_pixels = cell.pixels;
    ref_stream = *reference_events;
    query_stream = *query_events;
  } else {
    SynthOptions opt;
    opt.places = grid.places;
    opt.pixels = cell.pixels;
    opt.noise = grid.noise;
    opt.seed = grid.synth_seed;
    opt.window_us = cfg.window_us;
    SynthTraverse t = synthesize(opt);
    apply_layout(cfg, t.layout);
    ref_stream = std::move(t.reference);
    query_stream = std::move(t.query);
  }
  const TraverseDataset ref = build_dataset(ref_stream, cfg, "reference");
  const TraverseDataset query = build_dataset(query_stream, cfg, "query");
  const TrainResult trained = train_model(ref, cfg);

  const auto counts = spike_counts(trained.model, query, cfg);
  const auto averaged = accumulate_window(counts, cfg.accumulate_bins);
  Grid<double> scores(averaged.size(), trained.model.n_out);
  for (std::size_t q = 0; q < averaged.size(); ++q) {
    std::copy(averaged[q].begin(), averaged[q].end(), scores.row(q).begin());
  }
  const SimilarityMatrix lens_raw(std::move(scores));
  const SimilarityMatrix sad_raw =
      sad_matrix({ref.inputs, ref.selector}, {query.inputs, query.selector});
  const GroundTruth gt = grid.ground_truth
                             ? load_ground_truth(*grid.ground_truth, cfg.tolerance)
                             : GroundTruth::diagonal(lens_raw.queries(), cfg.tolerance);

  std::vector<SweepRow> rows;
  for (std::size_t len : grid.seq_lens) {
    if (len > std::min(lens_raw.queries(), lens_raw.references()) ||
        len > std::min(sad_raw.queries(), sad_raw.references())) {
      continue;
    }
    const auto lens = evaluate_matrix(sequence_convolve(lens_raw, len), gt, cfg.pr_thresholds, "lens");
    const auto sad = evaluate_matrix(sequence_convolve(sad_raw, len), gt, cfg.pr_thresholds, "sad");
    rows.push_back({cell.pixels, cell.multiplier, cfg.features, len,
                    trained.model.parameter_count(), lens.recall_at_1(), sad.recall_at_1(),
                    lens.recall_auc, sad.recall_auc});
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepGrid& grid) {
  std::optional<EventStream> ref_events;
  std::optional<EventStream> query_events;
  if (grid.reference) {
    ref_events = load_event_file(*grid.reference);
    query_events = load_event_file(*grid.query);
  }
  std::vector<CellInput> cells;
  for (std::size_t p : grid.pixels) {
    for (std::size_t m : grid.feature_multipliers) cells.push_back({p, m});
  }

  // Cells are independent; results are collected in grid order regardless of
  // completion order.
  std::vector<std::vector<SweepRow>> results(cells.size());
  for (std::size_t start = 0; start < cells.size(); start += grid.jobs) {
    const std::size_t end = std::min(cells.size(), start + grid.jobs);
    std::vector<std::future<std::vector<SweepRow>>> running;
    for (std::size_t k = start; k < end; ++k) {
      running.push_back(std::async(end - start > 1 ? std::launch::async : std::launch::deferred,
                                   run_cell, std::cref(grid), cells[k],
                                   ref_events ? &*ref_events : nullptr,
                                   query_events ? &*query_events : nullptr));
    }
    for (std::size_t k = start; k < end; ++k) results[k] = running[k - start].get();
  }
  std::vector<SweepRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<SweepRow> cmd_sweep(const fs::path& grid_file, const fs::path& out_dir) {
  const SweepGrid grid = load_sweep_grid(grid_file);
  const auto rows = run_sweep(grid);
  std::ostringstream out;
  out << "pixels,feature_multiplier,features,seq_len,parameters,lens_recall_at_1,sad_recall_at_1,"
         "lens_recall_auc,sad_recall_auc\n";
  for (const auto& r : rows) {
    out << r.pixels << ',' << r.feature_multiplier << ',' << r.features << ',' << r.seq_len << ','
        << r.parameters << ',' << text::format_double(r.lens_recall_at_1) << ','
        << text::format_double(r.sad_recall_at_1) << ',' << text::format_double(r.lens_recall_auc)
        << ',' << text::format_double(r.sad_recall_auc) << '\n';
  }
  text::write_file(out_dir / "sweep.csv", out.str());
  return rows;
}

}  // namespace lens
