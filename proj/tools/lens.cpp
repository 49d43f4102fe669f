// lens: train, localize, evaluate and sweep from the command line.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lens/error.hpp"
#include "lens/pipeline.hpp"
#include "lens/sweep.hpp"
#include "lens/text.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kValidationExit = 1;
constexpr int kIoExit = 2;

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config, "Configuration file (key = value lines)");
    cmd->add_option("--set", overrides, "Override one config key, e.g. --set features=63");
  }

  lens::Config load() const {
    lens::Config cfg = config.empty() ? lens::Config{} : lens::load_config(config);
    lens::apply_overrides(cfg, overrides);
    return cfg;
  }
};

void print_matches_summary(const char* what, const lens::LocalizeResult& res) {
  std::cout << what << ": " << res.raw.queries() << " queries x " << res.raw.references()
            << " references, " << res.sequence.provenance() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LENS spiking visual place recognition"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train a model on a reference traverse");
  CommonOptions train_opts;
  std::string train_events;
  std::string train_out;
  train_opts.add_to(train);
  train->add_option("--events", train_events, "Reference event file")->required();
  train->add_option("--out", train_out, "Model output path")->required();

  // localize
  auto* loc = app.add_subcommand("localize", "Localize a query traverse against a model");
  CommonOptions loc_opts;
  std::string loc_model;
  std::string loc_events;
  std::string loc_out;
  std::optional<std::size_t> loc_seq;
  loc_opts.add_to(loc);
  loc->add_option("--model", loc_model, "Model file")->required();
  loc->add_option("--events", loc_events, "Query event file")->required();
  loc->add_option("--seq-len", loc_seq, "Sequence length L");
  loc->add_option("--out", loc_out, "Output directory")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Recall@N and precision-recall for similarity matrices");
  CommonOptions ev_opts;
  std::vector<std::string> ev_matrices;
  std::string ev_gt;
  std::optional<std::size_t> ev_tol;
  std::string ev_out;
  bool ev_plot = false;
  ev_opts.add_to(ev);
  ev->add_option("--matrix", ev_matrices, "Similarity matrix files")->required();
  ev->add_option("--gt", ev_gt, "Ground truth file (query_index,reference_index); diagonal if omitted");
  ev->add_option("--tolerance", ev_tol, "Ground-truth tolerance in places");
  ev->add_option("--out", ev_out, "Output directory")->required();
  ev->add_flag("--plot", ev_plot, "Also write SVG plots");

  // baseline
  auto* base = app.add_subcommand("baseline", "Sum-of-absolute-differences matching");
  CommonOptions base_opts;
  std::string base_ref;
  std::string base_query;
  std::string base_out;
  std::optional<std::size_t> base_seq;
  base_opts.add_to(base);
  base->add_option("--ref", base_ref, "Reference event file")->required();
  base->add_option("--query", base_query, "Query event file")->required();
  base->add_option("--seq-len", base_seq, "Sequence length L");
  base->add_option("--out", base_out, "Output directory")->required();

  // synth
  auto* syn = app.add_subcommand("synth", "Generate a synthetic reference/query pair");
  lens::SynthOptions syn_opts;
  std::string syn_out;
  syn->add_option("--places", syn_opts.places, "Number of places")->required();
  syn->add_option("--pixels", syn_opts.pixels, "Pixels per place (perfect square)")->required();
  syn->add_option("--noise", syn_opts.noise, "Fraction of perturbed query pixels")->required();
  syn->add_option("--seed", syn_opts.seed, "Random seed")->required();
  syn->add_option("--out", syn_out, "Output directory")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "Pixels x feature-multiplier x sequence-length sweep");
  std::string sw_grid;
  std::string sw_out;
  sw->add_option("--grid", sw_grid, "Grid file")->required();
  sw->add_option("--out", sw_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationExit;
  }

  try {
    if (*train) {
      const lens::Config cfg = train_opts.load();
      const auto s = lens::cmd_train(cfg, train_events, train_out);
      std::cout << "layers: " << s.n_in << " x " << s.n_feat << " x " << s.n_out << '\n'
                << "parameters: " << s.parameters << '\n'
                << "model: " << s.model_path.string() << " (" << s.model_bytes << " bytes)\n"
                << "log: " << s.log_path.string() << '\n';
    } else if (*loc) {
      lens::Config cfg = loc_opts.load();
      if (loc_seq) cfg.seq_len = *loc_seq;
      const auto res = lens::cmd_localize(cfg, loc_model, loc_events, loc_out);
      print_matches_summary("localize", res);
    } else if (*ev) {
      lens::Config cfg = ev_opts.load();
      if (ev_tol) cfg.tolerance = *ev_tol;
      std::vector<fs::path> paths(ev_matrices.begin(), ev_matrices.end());
      std::optional<fs::path> gt;
      if (!ev_gt.empty()) gt = ev_gt;
      const auto reports = lens::cmd_evaluate(cfg, paths, gt, ev_out, ev_plot);
      for (const auto& r : reports) {
        std::cout << r.name << ": recall@1=" << lens::text::format_double(r.recall_at_1())
                  << " recall_auc=" << lens::text::format_double(r.recall_auc)
                  << " pr_auc=" << lens::text::format_double(r.pr_auc) << '\n';
      }
    } else if (*base) {
      lens::Config cfg = base_opts.load();
      if (base_seq) cfg.seq_len = *base_seq;
      const auto res = lens::cmd_baseline(cfg, base_ref, base_query, base_out);
      print_matches_summary("baseline", res);
    } else if (*syn) {
      const auto paths = lens::cmd_synth(syn_opts, syn_out);
      std::cout << "reference: " << paths.reference.string() << '\n'
                << "query: " << paths.query.string() << '\n'
                << "ground truth: " << paths.ground_truth.string() << '\n'
                << "config: " << paths.config.string() << '\n';
    } else if (*sw) {
      const auto rows = lens::cmd_sweep(sw_grid, sw_out);
      std::cout << "sweep: " << rows.size() << " rows -> " << (fs::path(sw_out) / "sweep.csv").string()
                << '\n';
    }
  } catch (const lens::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoExit;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoExit;
  } catch (const lens::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  }
  return 0;
}
