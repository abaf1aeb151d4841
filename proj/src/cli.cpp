/*
 * Copyright 2026 The psod-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "psod/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psod/conventional.hpp"
#include "psod/error.hpp"
#include "psod/losses.hpp"
#include "psod/mask_io.hpp"
#include "psod/pluralistic.hpp"
#include "psod/preference.hpp"
#include "psod/report_io.hpp"
#include "psod/synthgen.hpp"

namespace psod::cli {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot write " + out_path);
  f << text;
  if (!f) throw IoError("write failed: " + out_path);
}

struct EvalArgs {
  std::string manifest;
  double tau = 0.0;
  std::string out;
  std::string format = "csv";
  bool sweep = false;
  bool conventional = false;
  std::size_t threads = 0;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto loaded = load_manifest(a.manifest);
  const MetricConfig cfg;
  const EvalOptions opts{a.threads};
  std::string text;
  if (a.conventional) {
    const auto table = conventional_eval(loaded.records, cfg, opts);
    if (a.format == "json") {
      ordered_json doc;
      ordered_json rows = ordered_json::array();
      for (const auto& r : table.rows) {
        rows.push_back({{"id", r.id}, {"f_max", r.f_max}, {"f_avg", r.f_avg},
                        {"s_measure", r.s_measure}, {"mae", r.mae}});
      }
      doc["images"] = std::move(rows);
      doc["mean"] = {{"f_max", table.mean.f_max}, {"f_avg", table.mean.f_avg},
                     {"s_measure", table.mean.s_measure},
                     {"mae", table.mean.mae}};
      text = doc.dump(2) + "\n";
    } else {
      text = conventional_csv(table);
    }
  } else if (a.sweep) {
    const auto taus = default_taus();
    const auto curve = pr_curve(loaded.records, taus, cfg, opts);
    const auto best = best_f1_point(curve);
    text = a.format == "json" ? curve_json(curve, best) : curve_csv(curve, best);
  } else {
    const auto report = evaluate(loaded.records, a.tau, cfg, opts);
    for (const auto& s : report.per_image) {
      if (s.fallback) {
        err << "note: " << s.id << ": no prediction reached tau="
            << format_fixed4(a.tau) << ", kept top-scoring prediction "
            << s.kept_pred_indices.front() << "\n";
      }
    }
    text = a.format == "json" ? eval_report_json(report)
                              : eval_report_csv(report);
  }
  emit(text, a.out, out);
  return kOk;
}

struct MetricsArgs {
  std::string pred, gt, out;
  std::string format = "csv";
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  const SaliencyMap pred = load_mask(a.pred);
  const SaliencyMap gt = load_mask(a.gt);
  require_same_shape(pred, gt);
  const MetricConfig cfg;
  const SaliencyMap gt_bin = binarize(gt, 0.5);
  const FCurve curve = f_curve(pred, gt_bin, cfg);
  const std::pair<const char*, double> values[] = {
      {"f_max", f_max(curve)},
      {"f_avg", f_mean(curve)},
      {"s_measure", s_measure(pred, gt_bin, cfg)},
      {"e_mean", e_measure_mean(pred, gt_bin, cfg)},
      {"mae", mae(pred, gt)},
      {"match", match_score(pred, gt, cfg)},
  };
  std::string text;
  if (a.format == "json") {
    ordered_json doc;
    for (const auto& [k, v] : values) doc[k] = v;
    text = doc.dump(2) + "\n";
  } else {
    std::string header, row;
    for (const auto& [k, v] : values) {
      header += (header.empty() ? "" : ",") + std::string(k);
      row += (row.empty() ? "" : ",") + format_fixed4(v);
    }
    text = header + "\n" + row + "\n";
  }
  emit(text, a.out, out);
  return kOk;
}

struct LossesArgs {
  std::vector<std::string> preds, gts;
  double lambda = 2.5;
  std::string out;
  std::string format = "csv";
};

int cmd_losses(const LossesArgs& a, std::ostream& out) {
  std::vector<SaliencyMap> preds, gts;
  for (const auto& p : a.preds) preds.push_back(load_mask(p));
  for (const auto& g : a.gts) gts.push_back(load_mask(g));
  for (const auto& m : preds) require_same_shape(m, gts.front());
  for (const auto& m : gts) require_same_shape(m, gts.front());
  LossConfig cfg;
  cfg.lambda_ce = a.lambda;
  cfg.validate();
  const auto sel = min_loss_select(preds, gts, cfg);
  std::string text;
  if (a.format == "json") {
    ordered_json doc;
    ordered_json table = ordered_json::array();
    for (const auto& row : sel.table) {
      ordered_json r = ordered_json::array();
      for (const auto& l : row) {
        r.push_back({{"ce", l.ce}, {"dice", l.dice}, {"total", l.total}});
      }
      table.push_back(std::move(r));
    }
    doc["table"] = std::move(table);
    doc["selected"] = {{"k", sel.pred_index},
                       {"j", sel.gt_index},
                       {"ce", sel.loss.ce},
                       {"dice", sel.loss.dice},
                       {"total", sel.loss.total}};
    text = doc.dump(2) + "\n";
  } else {
    text = "k,j,ce,dice,total,selected\n";
    for (std::size_t k = 0; k < sel.table.size(); ++k) {
      for (std::size_t j = 0; j < sel.table[k].size(); ++j) {
        const auto& l = sel.table[k][j];
        const bool chosen = static_cast<Eigen::Index>(k) == sel.pred_index &&
                            static_cast<Eigen::Index>(j) == sel.gt_index;
        text += std::to_string(k) + "," + std::to_string(j) + "," +
                format_fixed4(l.ce) + "," + format_fixed4(l.dice) + "," +
                format_fixed4(l.total) + "," + (chosen ? "1" : "0") + "\n";
      }
    }
  }
  emit(text, a.out, out);
  return kOk;
}

struct AlignArgs {
  std::string pairs;
  std::string tie_policy = "half";
  std::string metric = "match";
  std::string out;
  std::string format = "csv";
};

int cmd_align(const AlignArgs& a, std::ostream& out) {
  const TiePolicy policy = parse_tie_policy(a.tie_policy);
  const MetricKind kind = parse_metric_kind(a.metric);
  const auto pairs = load_preference_pairs(a.pairs, kind, MetricConfig{});
  const double acc = alignment_accuracy(pairs, policy);
  std::string text;
  if (a.format == "json") {
    ordered_json doc;
    doc["accuracy"] = acc;
    doc["n_pairs"] = pairs.size();
    doc["tie_policy"] = a.tie_policy;
    text = doc.dump(2) + "\n";
  } else {
    text = format_fixed4(acc) + "\n";
  }
  emit(text, a.out, out);
  return kOk;
}

struct GenArgs {
  std::string out;
  std::size_t n = 100;
  std::uint64_t seed = 42;
  std::string objects = "2,3";
  std::string degradations;
  std::string base = "erode:0";
  Eigen::Index width = 512;
  Eigen::Index height = 512;
  std::size_t preds = 5;
  bool no_cap = false;
  std::size_t threads = 0;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  BenchmarkConfig cfg;
  cfg.n_images = a.n;
  cfg.seed = a.seed;
  cfg.width = a.width;
  cfg.height = a.height;
  cfg.preds_per_image = a.preds;
  cfg.cap_gts = !a.no_cap;
  cfg.threads = a.threads;
  cfg.base = parse_degradation(a.base);
  if (!a.degradations.empty()) {
    cfg.schedule = parse_degradation_list(a.degradations);
  }
  cfg.object_counts.clear();
  std::stringstream ss(a.objects);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      cfg.object_counts.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError("bad --objects entry '" + item + "'");
    }
  }
  const auto files = generate_benchmark(cfg, a.out);
  out << files.manifest.string() << "\n";
  return kOk;
}

struct SelectArgs {
  std::vector<std::string> manifests;
  std::string out;
};

int cmd_select(const SelectArgs& a, std::ostream& out) {
  std::vector<Manifest> methods;
  for (const auto& m : a.manifests) methods.push_back(read_manifest(m));

  const fs::path out_dir = fs::absolute(fs::path(a.out)).parent_path();
  auto relative = [&](const Manifest& m, const std::string& p) {
    return fs::absolute(m.resolve(p))
        .lexically_normal()
        .lexically_relative(out_dir)
        .generic_string();
  };

  Manifest merged;
  merged.base = out_dir;
  for (const auto& img : methods.front().images) {
    std::vector<double> scores;
    std::vector<std::pair<const Manifest*, const PredictionEntry*>> cands;
    for (const auto& m : methods) {
      const auto it =
          std::find_if(m.images.begin(), m.images.end(),
                       [&](const ManifestEntry& e) { return e.id == img.id; });
      if (it == m.images.end()) continue;
      for (const auto& p : it->preds) {
        if (!p.score) {
          throw ValidationError("image '" + img.id +
                                "': selection needs a score on every "
                                "prediction");
        }
        scores.push_back(*p.score);
        cands.emplace_back(&m, &p);
      }
    }
    const std::size_t best = select_best_mask(scores);
    ManifestEntry e;
    e.id = img.id;
    for (const auto& g : img.gts) e.gts.push_back(relative(methods.front(), g));
    e.preds.push_back(
        {relative(*cands[best].first, cands[best].second->path),
         cands[best].second->score});
    merged.images.push_back(std::move(e));
  }
  write_manifest(merged, a.out);
  out << a.out << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pluralistic salient-object-detection evaluation toolkit",
               "psod"};
  app.require_subcommand(1);
  const std::vector<std::string> formats = {"csv", "json"};

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "AP / AR / F1 over a manifest");
  eval->add_option("--manifest", eval_args.manifest, "Manifest JSON")
      ->required();
  eval->add_option("--tau", eval_args.tau, "Quality threshold")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--out", eval_args.out, "Output file (default stdout)");
  eval->add_option("--format", eval_args.format)->check(CLI::IsMember(formats));
  eval->add_flag("--sweep", eval_args.sweep,
                 "Sweep tau over 0.0..0.9 and report the best-F1 point");
  eval->add_flag("--conventional", eval_args.conventional,
                 "Single-mask table (first pred vs first gt)");
  eval->add_option("--threads", eval_args.threads,
                   "Worker threads (default $PSOD_THREADS or all cores)");

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Metrics for one mask pair");
  metrics->add_option("--pred", metrics_args.pred)->required();
  metrics->add_option("--gt", metrics_args.gt)->required();
  metrics->add_option("--out", metrics_args.out);
  metrics->add_option("--format", metrics_args.format)
      ->check(CLI::IsMember(formats));

  LossesArgs losses_args;
  auto* losses = app.add_subcommand("losses", "Mask-loss table and min pair");
  losses->add_option("--preds", losses_args.preds)->required();
  losses->add_option("--gts", losses_args.gts)->required();
  losses->add_option("--lambda", losses_args.lambda, "CE weight");
  losses->add_option("--out", losses_args.out);
  losses->add_option("--format", losses_args.format)
      ->check(CLI::IsMember(formats));

  AlignArgs align_args;
  auto* align = app.add_subcommand("align", "Pairwise preference accuracy");
  align->add_option("--pairs", align_args.pairs)->required();
  align->add_option("--tie-policy", align_args.tie_policy)
      ->check(CLI::IsMember({"half", "wrong"}));
  align->add_option("--metric", align_args.metric,
                    "Scorer for mask paths: mae f_max f_avg e_mean s_measure "
                    "match");
  align->add_option("--out", align_args.out);
  align->add_option("--format", align_args.format)
      ->check(CLI::IsMember(formats));

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Write a synthetic benchmark");
  gen->add_option("--out", gen_args.out, "Output directory")->required();
  gen->add_option("--n", gen_args.n, "Number of images");
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--objects", gen_args.objects,
                  "Object counts drawn per image, e.g. 2,3");
  gen->add_option("--degradations", gen_args.degradations,
                  "Schedule, e.g. erode:3,holes:6");
  gen->add_option("--base", gen_args.base,
                  "Degradation for the per-GT predictions");
  gen->add_option("--width", gen_args.width);
  gen->add_option("--height", gen_args.height);
  gen->add_option("--preds", gen_args.preds, "Predictions per image");
  gen->add_flag("--no-cap", gen_args.no_cap, "Allow more than 3 GTs");
  gen->add_option("--threads", gen_args.threads);

  SelectArgs select_args;
  auto* select = app.add_subcommand(
      "select", "Merge methods keeping the top-scoring mask per image");
  select->add_option("--manifests", select_args.manifests)->required();
  select->add_option("--out", select_args.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*eval) return cmd_eval(eval_args, out, err);
    if (*metrics) return cmd_metrics(metrics_args, out);
    if (*losses) return cmd_losses(losses_args, out);
    if (*align) return cmd_align(align_args, out);
    if (*gen) return cmd_gen(gen_args, out);
    if (*select) return cmd_select(select_args, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}

}  // namespace psod::cli
