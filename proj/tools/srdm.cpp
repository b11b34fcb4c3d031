// srdm: distribution-based super-resolution quality metric and companion
// evaluation tools (back-projection fidelity, Glicko rating of pairwise
// votes, correlation reports, sliced-Wasserstein loss, robustness sweeps).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "srdm/analysis.hpp"
#include "srdm/csv.hpp"
#include "srdm/glicko.hpp"
#include "srdm/image.hpp"
#include "srdm/metric.hpp"
#include "srdm/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "srdm 0.1.0";

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = all cores
};

// Echoed verbatim into every output document so a run can be replayed.
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void add(const std::string& key, long long value) { entries.emplace_back(key, std::to_string(value)); }

  json to_json() const {
    json j;
    j["tool"] = kVersion;
    j["subcommand"] = subcommand;
    for (const auto& [k, v] : entries) j[k] = v;
    return j;
  }

  std::string to_comment_block() const {
    std::string out = "# tool=" + std::string(kVersion) + "\n# subcommand=" + subcommand + "\n";
    for (const auto& [k, v] : entries) out += "# " + k + "=" + v + "\n";
    return out;
  }
};

struct TriplePaths {
  std::string stem;
  fs::path lr, hr, sr;
};

std::map<std::string, fs::path> index_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": not a directory");
  std::map<std::string, fs::path> by_stem;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    if (ext != ".png" && ext != ".pgm") continue;
    by_stem[entry.path().stem().string()] = entry.path();
  }
  return by_stem;
}

// Filename-stem matching across the three directories; any stem missing from
// a directory is a contract error naming the offender.
std::vector<TriplePaths> match_triples(const fs::path& lr_dir, const fs::path& hr_dir,
                                       const fs::path& sr_dir) {
  auto lr = index_dir(lr_dir);
  auto hr = index_dir(hr_dir);
  auto sr = index_dir(sr_dir);
  std::vector<std::string> missing;
  std::vector<TriplePaths> triples;
  for (const auto& [stem, path] : lr) {
    auto hit_hr = hr.find(stem);
    auto hit_sr = sr.find(stem);
    if (hit_hr == hr.end()) missing.push_back(stem + " (missing in " + hr_dir.string() + ")");
    if (hit_sr == sr.end()) missing.push_back(stem + " (missing in " + sr_dir.string() + ")");
    if (hit_hr != hr.end() && hit_sr != sr.end())
      triples.push_back({stem, path, hit_hr->second, hit_sr->second});
  }
  for (const auto& [stem, path] : hr)
    if (!lr.count(stem)) missing.push_back(stem + " (missing in " + lr_dir.string() + ")");
  for (const auto& [stem, path] : sr)
    if (!lr.count(stem)) missing.push_back(stem + " (missing in " + lr_dir.string() + ")");
  if (!missing.empty()) {
    std::string msg = "unmatched filenames:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw std::runtime_error(msg);
  }
  if (triples.empty()) throw std::runtime_error("no image triples found");
  return triples;
}

std::vector<srdm::ImageTriple> load_triples(const std::vector<TriplePaths>& paths) {
  std::vector<srdm::ImageTriple> dataset(paths.size());
  srdm::parallel_for(paths.size(), [&](std::size_t i) {
    dataset[i].lr = srdm::load_image(paths[i].lr.string());
    dataset[i].hr_gt = srdm::load_image(paths[i].hr.string());
    dataset[i].hr_gen = srdm::load_image(paths[i].sr.string());
  });
  return dataset;
}

srdm::PixelOffset pixel_from_name(const std::string& name, int scale) {
  if (name == "center") return srdm::default_pixel_offset(scale);
  if (name == "top-left") return {0, 0};
  if (name == "bottom-right") return {scale - 1, scale - 1};
  throw std::invalid_argument("unknown pixel choice: " + name);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for write");
  out << content;
}

struct MetricFlags {
  int scale = 4;
  int patch_size = 13;
  int stride = 0;
  int n_groups = 0;
  int min_group_samples = 50;
  std::string distance = "wasserstein";
  std::string grouping = "projected_fpc";
  std::string pixel = "center";

  void attach(CLI::App* cmd) {
    cmd->add_option("--scale", scale, "SR scale factor s")->capture_default_str();
    cmd->add_option("--patch-size", patch_size, "LR patch size r (odd)")->capture_default_str();
    cmd->add_option("--stride", stride, "sliding-window stride (0 = scale)")->capture_default_str();
    cmd->add_option("--ngroups", n_groups, "number of groups (0 = auto, samples/1000)")
        ->capture_default_str();
    cmd->add_option("--min-group-samples", min_group_samples, "drop groups smaller than this")
        ->capture_default_str();
    cmd->add_option("--distance", distance, "distribution distance")
        ->check(CLI::IsMember({"wasserstein", "tv", "js", "kl"}))
        ->capture_default_str();
    cmd->add_option("--grouping", grouping, "grouping mode")
        ->check(CLI::IsMember({"direct", "projected_fpc", "projected_ones"}))
        ->capture_default_str();
    cmd->add_option("--pixel", pixel, "HR pixel selection within the s x s block")
        ->check(CLI::IsMember({"center", "top-left", "bottom-right"}))
        ->capture_default_str();
  }

  srdm::MetricConfig to_config(std::uint64_t seed) const {
    srdm::MetricConfig cfg;
    cfg.scale = scale;
    cfg.patch_size = patch_size;
    cfg.stride = stride;
    cfg.n_groups = n_groups;
    cfg.min_group_samples = min_group_samples;
    cfg.distance = srdm::distance_from_string(distance);
    cfg.grouping_mode = srdm::grouping_mode_from_string(grouping);
    auto off = pixel_from_name(pixel, scale);
    cfg.pixel_dr = off.dr;
    cfg.pixel_dc = off.dc;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }

  void echo(RunManifest& m) const {
    m.add("scale", scale);
    m.add("patch_size", patch_size);
    m.add("stride", stride);
    m.add("ngroups", n_groups);
    m.add("min_group_samples", min_group_samples);
    m.add("distance", distance);
    m.add("grouping", grouping);
    m.add("pixel", pixel);
  }
};

std::string report_csv(const srdm::MetricReport& report, const RunManifest& manifest) {
  std::string out = manifest.to_comment_block();
  out += "group,gt_count,gen_count,distance\n";
  for (const auto& g : report.per_group) {
    out += std::to_string(g.group) + "," + std::to_string(g.gt_count) + "," +
           std::to_string(g.gen_count) + "," + srdm::format_real(g.distance) + "\n";
  }
  return out;
}

int run_evaluate(const std::vector<std::string>& dirs, const MetricFlags& flags,
                 const GlobalOpts& global, bool per_image, const std::string& out_json,
                 const std::string& out_csv) {
  auto triples = match_triples(dirs[0], dirs[1], dirs[2]);
  auto dataset = load_triples(triples);
  srdm::MetricConfig cfg = flags.to_config(global.seed);

  RunManifest manifest;
  manifest.subcommand = "evaluate";
  manifest.add("lr_dir", dirs[0]);
  manifest.add("hr_dir", dirs[1]);
  manifest.add("sr_dir", dirs[2]);
  flags.echo(manifest);
  manifest.add("seed", static_cast<long long>(global.seed));
  manifest.add("per_image", per_image ? "true" : "false");

  srdm::MetricReport report = srdm::compute_metric(dataset, cfg);
  double aggregate = report.aggregate;
  if (per_image) aggregate = srdm::compute_metric_per_image(dataset, cfg);

  json j = report.to_json();
  j["manifest"] = manifest.to_json();
  if (per_image) j["per_image_aggregate"] = aggregate;
  write_text(out_json, j.dump(2) + "\n");
  write_text(out_csv, report_csv(report, manifest));

  std::cout << srdm::format_real(aggregate) << "\n";
  return 0;
}

int run_backproject(const std::string& sr_dir, const std::string& lr_dir, int scale,
                    const std::string& kernel_name, const std::string& out_csv) {
  auto sr = index_dir(sr_dir);
  auto lr = index_dir(lr_dir);
  std::vector<std::string> missing;
  for (const auto& [stem, path] : sr)
    if (!lr.count(stem)) missing.push_back(stem);
  for (const auto& [stem, path] : lr)
    if (!sr.count(stem)) missing.push_back(stem);
  if (!missing.empty()) {
    std::string msg = "unmatched filenames:";
    for (const auto& m : missing) msg += " " + m;
    throw std::runtime_error(msg);
  }
  if (sr.empty()) throw std::runtime_error("no image pairs found");

  srdm::Kernel kernel = srdm::kernel_from_string(kernel_name);
  RunManifest manifest;
  manifest.subcommand = "backproject";
  manifest.add("sr_dir", sr_dir);
  manifest.add("lr_dir", lr_dir);
  manifest.add("scale", scale);
  manifest.add("kernel", kernel_name);

  std::string csv = manifest.to_comment_block() + "image,rmse\n";
  double sum = 0.0;
  for (const auto& [stem, path] : sr) {
    srdm::GrayImage sr_img = srdm::load_image(path.string());
    srdm::GrayImage lr_img = srdm::load_image(lr.at(stem).string());
    double rmse = srdm::back_projection_error(sr_img, lr_img, scale, kernel);
    sum += rmse;
    csv += stem + "," + srdm::format_real(rmse) + "\n";
  }
  double mean = sum / static_cast<double>(sr.size());
  csv += "mean," + srdm::format_real(mean) + "\n";
  write_text(out_csv, csv);
  std::cout << srdm::format_real(mean) << "\n";
  return 0;
}

int run_rate(const std::string& votes_path, int shuffles, const GlobalOpts& global,
             bool batch_periods, const std::string& out_csv) {
  auto votes = srdm::load_votes_csv(votes_path);
  if (votes.empty()) throw std::runtime_error(votes_path + ": empty votes file");
  std::vector<std::string> methods;
  {
    std::map<std::string, bool> seen;
    for (const auto& v : votes) {
      if (!seen.count(v.winner)) {
        seen[v.winner] = true;
        methods.push_back(v.winner);
      }
      if (!seen.count(v.loser)) {
        seen[v.loser] = true;
        methods.push_back(v.loser);
      }
    }
    std::sort(methods.begin(), methods.end());
  }

  auto ratings = srdm::rate_tournament(
      votes, methods, shuffles, global.seed,
      batch_periods ? srdm::RatingPeriod::per_shuffle : srdm::RatingPeriod::per_vote);
  auto ranking = srdm::conservative_ranking(ratings);

  RunManifest manifest;
  manifest.subcommand = "rate";
  manifest.add("votes", votes_path);
  manifest.add("shuffles", shuffles);
  manifest.add("seed", static_cast<long long>(global.seed));
  manifest.add("period", batch_periods ? "per_shuffle" : "per_vote");

  std::string csv = manifest.to_comment_block() + "method,rating,deviation,lower_bound\n";
  for (const auto& row : ranking)
    csv += row.method_id + "," + srdm::format_real(row.rating) + "," +
           srdm::format_real(row.deviation) + "," + srdm::format_real(row.lower_bound) + "\n";
  write_text(out_csv, csv);
  for (const auto& row : ranking)
    std::cout << row.method_id << " " << srdm::format_real(row.lower_bound) << "\n";
  return 0;
}

int run_correlate(const std::string& scores_path, const std::string& out_csv,
                  const std::string& svg_prefix) {
  auto table = srdm::load_scores_csv(scores_path);
  auto report = srdm::correlation_report(table);

  RunManifest manifest;
  manifest.subcommand = "correlate";
  manifest.add("scores", scores_path);

  std::string csv = manifest.to_comment_block();
  csv += "kind,method,metric,value,extra\n";
  for (const auto& row : table.rows) {
    csv += "scatter," + row.method_id + "," + srdm::format_real(row.metric_score) + "," +
           srdm::format_real(row.glicko) + "," +
           (row.backproj ? srdm::format_real(*row.backproj) : std::string()) + "\n";
  }
  for (const auto& s : report.summaries) {
    csv += "pearson_" + s.axis + ",,," + srdm::format_real(s.pearson_r) +
           (s.degenerate ? ",degenerate_two_points" : ",") + "\n";
    csv += "fit_" + s.axis + ",,," + srdm::format_real(s.fit.slope) + "," +
           srdm::format_real(s.fit.intercept) + "\n";
  }
  write_text(out_csv, csv);

  if (!svg_prefix.empty()) {
    for (const auto& s : report.summaries)
      write_text(svg_prefix + "_" + s.axis + ".svg", srdm::correlation_svg(table, s));
  }
  for (const auto& s : report.summaries)
    std::cout << "pearson_" << s.axis << " " << srdm::format_real(s.pearson_r) << "\n";
  return 0;
}

int run_loss(const std::string& gen_path, const std::string& gt_path,
             const std::string& grad_out) {
  auto gen = srdm::load_values_csv(gen_path);
  auto gt = srdm::load_values_csv(gt_path);
  if (gen.empty() || gt.empty()) throw std::runtime_error("loss: empty value list");
  double value = srdm::sliced_w2(gen, gt);
  std::cout << srdm::format_real(value) << "\n";
  if (!grad_out.empty()) {
    std::vector<double> gt_matched = gt;
    if (gt_matched.size() != gen.size()) {
      std::sort(gt_matched.begin(), gt_matched.end());
      gt_matched = srdm::detail::quantile_resample(gt_matched, gen.size());
    }
    auto grad = srdm::sliced_w2_grad(gen, gt_matched);
    RunManifest manifest;
    manifest.subcommand = "loss";
    manifest.add("gen", gen_path);
    manifest.add("gt", gt_path);
    std::string csv = manifest.to_comment_block() + "index,gradient\n";
    for (std::size_t i = 0; i < grad.size(); ++i)
      csv += std::to_string(i) + "," + srdm::format_real(grad[i]) + "\n";
    write_text(grad_out, csv);
  }
  return 0;
}

int run_sweep(const std::vector<std::string>& dirs, const MetricFlags& flags,
              const GlobalOpts& global, const std::string& vary, int repetitions,
              const std::string& out_csv) {
  auto triples = match_triples(dirs[0], dirs[1], dirs[2]);
  auto dataset = load_triples(triples);

  RunManifest manifest;
  manifest.subcommand = "sweep";
  manifest.add("lr_dir", dirs[0]);
  manifest.add("hr_dir", dirs[1]);
  manifest.add("sr_dir", dirs[2]);
  flags.echo(manifest);
  manifest.add("seed", static_cast<long long>(global.seed));
  manifest.add("vary", vary);

  std::string csv = manifest.to_comment_block() + "parameter,value,aggregate,variance\n";
  auto emit = [&csv, &vary](const std::string& value, double aggregate, double variance = 0.0) {
    csv += vary + "," + value + "," + srdm::format_real(aggregate) + "," +
           srdm::format_real(variance) + "\n";
  };

  if (vary == "r") {
    for (int r = 13; r <= 35; r += 2) {
      MetricFlags f = flags;
      f.patch_size = r;
      emit(std::to_string(r), srdm::compute_metric(dataset, f.to_config(global.seed)).aggregate);
    }
  } else if (vary == "ngroups") {
    for (int k : {50, 100, 200, 500, 1000}) {
      MetricFlags f = flags;
      f.n_groups = k;
      srdm::MetricConfig cfg = f.to_config(global.seed);
      srdm::PatchPairSet ps = srdm::extract_dataset(dataset, cfg);
      if (static_cast<std::size_t>(k) > ps.samples.size()) continue;
      emit(std::to_string(k), srdm::compute_metric_on_samples(ps, cfg).aggregate);
    }
  } else if (vary == "pixel") {
    for (const char* p : {"center", "top-left", "bottom-right"}) {
      MetricFlags f = flags;
      f.pixel = p;
      emit(p, srdm::compute_metric(dataset, f.to_config(global.seed)).aggregate);
    }
  } else if (vary == "distance") {
    for (const char* d : {"wasserstein", "tv", "js"}) {
      MetricFlags f = flags;
      f.distance = d;
      emit(d, srdm::compute_metric(dataset, f.to_config(global.seed)).aggregate);
    }
  } else if (vary == "nsamples") {
    for (int ns : {500, 1000, 2000, 3000}) {
      try {
        auto res = srdm::metric_with_subsampling(dataset, flags.to_config(global.seed), ns,
                                                 repetitions, global.seed);
        emit(std::to_string(ns), res.mean, res.variance);
      } catch (const std::runtime_error&) {
        // all groups smaller than ns; skip this point
      }
    }
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + vary);
  }
  write_text(out_csv, csv);
  std::cout << "wrote " << out_csv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-based super-resolution quality metric and evaluation tools"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config")->description("key = value config file; flags override it");
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--seed", global.seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", global.threads, "worker thread cap (0 = all cores)")
      ->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "grouped projected metric over a triple set");
  std::vector<std::string> eval_dirs(3);
  evaluate->add_option("lr_dir", eval_dirs[0], "LR image directory")->required();
  evaluate->add_option("hr_dir", eval_dirs[1], "ground-truth HR directory")->required();
  evaluate->add_option("sr_dir", eval_dirs[2], "generated SR directory")->required();
  MetricFlags eval_flags;
  eval_flags.attach(evaluate);
  bool per_image = false;
  evaluate->add_flag("--per-image", per_image, "average per-image metrics instead of pooling");
  std::string eval_json = "report.json", eval_csv = "report.csv";
  evaluate->add_option("--out-json", eval_json)->capture_default_str();
  evaluate->add_option("--out-csv", eval_csv)->capture_default_str();

  // backproject
  auto* backproject = app.add_subcommand("backproject", "RMSE of downsampled SR vs LR input");
  std::string bp_sr, bp_lr, bp_kernel = "bicubic", bp_out = "backproject.csv";
  int bp_scale = 4;
  backproject->add_option("sr_dir", bp_sr)->required();
  backproject->add_option("lr_dir", bp_lr)->required();
  backproject->add_option("--scale", bp_scale)->capture_default_str();
  backproject->add_option("--kernel", bp_kernel)->check(CLI::IsMember({"box", "bicubic"}))
      ->capture_default_str();
  backproject->add_option("--out-csv", bp_out)->capture_default_str();

  // rate
  auto* rate = app.add_subcommand("rate", "Glicko rating of pairwise votes");
  std::string rate_votes, rate_out = "ratings.csv";
  int rate_shuffles = 100;
  bool rate_batch = false;
  rate->add_option("votes", rate_votes, "CSV with header winner,loser")->required();
  rate->add_option("--shuffles", rate_shuffles)->capture_default_str();
  rate->add_flag("--batch-periods", rate_batch, "one rating period per shuffle, not per vote");
  rate->add_option("--out-csv", rate_out)->capture_default_str();

  // correlate
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation and fit-line report");
  std::string corr_scores, corr_out = "correlation.csv", corr_svg;
  correlate->add_option("scores", corr_scores, "CSV with header method,metric,glicko[,backproj]")
      ->required();
  correlate->add_option("--out-csv", corr_out)->capture_default_str();
  correlate->add_option("--svg-prefix", corr_svg, "write <prefix>_<axis>.svg scatter plots");

  // loss
  auto* loss = app.add_subcommand("loss", "sliced Wasserstein-2 loss on 1-D sample files");
  std::string loss_gen, loss_gt, loss_grad;
  loss->add_option("gen", loss_gen, "CSV of generated values")->required();
  loss->add_option("gt", loss_gt, "CSV of ground-truth values")->required();
  loss->add_option("--grad-out", loss_grad, "write per-element gradient CSV");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "aggregate vs one swept design parameter");
  std::vector<std::string> sweep_dirs(3);
  sweep->add_option("lr_dir", sweep_dirs[0])->required();
  sweep->add_option("hr_dir", sweep_dirs[1])->required();
  sweep->add_option("sr_dir", sweep_dirs[2])->required();
  MetricFlags sweep_flags;
  sweep_flags.attach(sweep);
  std::string sweep_vary = "distance", sweep_out = "sweep.csv";
  int sweep_reps = 100;
  sweep->add_option("--vary", sweep_vary)
      ->check(CLI::IsMember({"r", "ngroups", "pixel", "distance", "nsamples"}))
      ->capture_default_str();
  sweep->add_option("--repetitions", sweep_reps, "repetitions for the nsamples sweep")
      ->capture_default_str();
  sweep->add_option("--out-csv", sweep_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  srdm::thread_limit() = global.threads;

  try {
    if (*evaluate) return run_evaluate(eval_dirs, eval_flags, global, per_image, eval_json, eval_csv);
    if (*backproject) return run_backproject(bp_sr, bp_lr, bp_scale, bp_kernel, bp_out);
    if (*rate) return run_rate(rate_votes, rate_shuffles, global, rate_batch, rate_out);
    if (*correlate) return run_correlate(corr_scores, corr_out, corr_svg);
    if (*loss) return run_loss(loss_gen, loss_gt, loss_grad);
    if (*sweep) return run_sweep(sweep_dirs, sweep_flags, global, sweep_vary, sweep_reps, sweep_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
