// Copyright 2026 The Prosofuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Operator entry point. Subcommands cover corpus preparation, feature
// extraction, training, evaluation, gradient checking and contour plots.
// stdout carries the machine-readable artifact of a command (tables, check
// results); progress goes to stderr. Exit codes: 0 success, 1 user error,
// 2 internal error.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prosofuse/adam.hpp"
#include "prosofuse/cli/config_file.hpp"
#include "prosofuse/cli/svg.hpp"
#include "prosofuse/cli/table.hpp"
#include "prosofuse/data/filter.hpp"
#include "prosofuse/data/manifest.hpp"
#include "prosofuse/data/split.hpp"
#include "prosofuse/data/stats.hpp"
#include "prosofuse/data/synth.hpp"
#include "prosofuse/dsp/config.hpp"
#include "prosofuse/dsp/contour.hpp"
#include "prosofuse/dsp/pitch.hpp"
#include "prosofuse/dsp/stft.hpp"
#include "prosofuse/dsp/wav.hpp"
#include "prosofuse/model/checkpoint.hpp"
#include "prosofuse/model/ffnn.hpp"
#include "prosofuse/model/gradsuite.hpp"
#include "prosofuse/model/tts.hpp"
#include "prosofuse/trainer/dataset.hpp"
#include "prosofuse/trainer/eval.hpp"
#include "prosofuse/trainer/trainer.hpp"

namespace pf = prosofuse;

// Training precision. Gradient checking runs in double inside the suite
// regardless of this choice.
using Real = float;

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool no_timestamps = false;

  pf::ConfigFile config;
  bool config_loaded = false;

  const pf::ConfigFile& cfg() {
    if (!config_loaded) {
      if (!config_path.empty()) {
        config = pf::ConfigFile::load(config_path);
        pf::validate_config_keys(config);
      }
      config_loaded = true;
    }
    return config;
  }
};

// Progress line on stderr. Timestamps are suppressed with --no-timestamps so
// a run's full output can be compared byte for byte.
void info(const Globals& g, const std::string& msg) {
  if (!g.no_timestamps) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%d %H:%M:%S",
                  std::localtime(&now));
    std::cerr << '[' << buf << "] ";
  }
  std::cerr << msg << '\n';
}

// Seed precedence: --seed flag, the named config key, PROSOFUSE_SEED, then
// the caller's fallback.
std::uint64_t resolve_seed(Globals& g, const char* config_key,
                           std::uint64_t fallback) {
  if (g.seed_set) return g.seed;
  if (config_key != nullptr && g.cfg().has(config_key))
    return g.cfg().get_u64(config_key);
  if (const char* env = std::getenv("PROSOFUSE_SEED")) {
    const std::string s(env);
    try {
      if (!s.empty() && (s[0] == '-' || s[0] == '+'))
        throw std::invalid_argument(s);
      std::size_t pos = 0;
      const std::uint64_t v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw pf::ConfigError("PROSOFUSE_SEED is not an unsigned integer: " + s);
    }
  }
  return fallback;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string split_counts(const pf::Manifest& m) {
  std::size_t train = 0, val = 0, test = 0, other = 0;
  for (const auto& r : m.records) {
    if (r.split == "train") {
      ++train;
    } else if (r.split == "val") {
      ++val;
    } else if (r.split == "test") {
      ++test;
    } else {
      ++other;
    }
  }
  std::string s = std::to_string(train) + " train / " + std::to_string(val) +
                  " val / " + std::to_string(test) + " test";
  if (other > 0) s += " / " + std::to_string(other) + " other";
  return s;
}

// --- prep ------------------------------------------------------------------

struct PrepSynthOpts {
  std::string out;
  std::string features_dir;
};

void run_prep_synth(Globals& g, const PrepSynthOpts& o) {
  pf::SynthConfig sc;
  pf::apply_synth_config(g.cfg(), sc);
  sc.seed = resolve_seed(g, "synth.seed", sc.seed);
  pf::Manifest m = pf::synth_dataset(sc);

  std::string dir = o.features_dir;
  if (dir.empty()) {
    dir = o.out;
    const auto dot = dir.rfind('.');
    const auto slash = dir.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
      dir.resize(dot);
    dir += ".features";
  }
  pf::materialize_features(m, dir);
  pf::save_manifest(m, o.out);
  info(g, "synth: " + std::to_string(m.records.size()) + " utterances (" +
              split_counts(m) + ") -> " + o.out);
}

void run_prep_stats(Globals& g, const std::string& manifest,
                    const std::string& out) {
  const pf::Manifest m = pf::load_manifest(manifest);
  const pf::DatasetStats s = pf::compute_stats(m);
  pf::save_stats(s, out);
  info(g, "stats: " + std::to_string(s.phone_pitch.size()) +
              " phones from the train split -> " + out);
}

struct PrepFilterOpts {
  std::string manifest;
  std::string stats;
  std::string out;
  std::string removed;
};

void run_prep_filter(Globals& g, const PrepFilterOpts& o) {
  const pf::Manifest m = pf::load_manifest(o.manifest);
  const pf::DatasetStats s = pf::load_stats(o.stats);
  pf::FilterConfig fc;
  pf::apply_filter_config(g.cfg(), fc);
  const pf::FilterResult res = pf::filter_outliers(m, s, fc);
  pf::save_manifest(res.kept, o.out);
  if (!o.removed.empty()) {
    std::ofstream rf(o.removed, std::ios::binary);
    if (!rf) throw pf::IoError("cannot write " + o.removed);
    rf << "id,phone,rule,value\n";
    char buf[64];
    for (const auto& r : res.removed) {
      std::snprintf(buf, sizeof(buf), "%.17g", r.value);
      rf << r.id << ',' << r.phone << ',' << r.rule << ',' << buf << '\n';
    }
    if (!rf) throw pf::IoError("short write: " + o.removed);
  }
  info(g, "filter: kept " + std::to_string(res.kept.records.size()) + " of " +
              std::to_string(m.records.size()) + " records (" +
              std::to_string(res.removed.size()) + " removed) -> " + o.out);
}

struct PrepSplitOpts {
  std::string manifest;
  std::string out;
  std::string ratios = "0.8,0.1,0.1";
};

void run_prep_split(Globals& g, const PrepSplitOpts& o) {
  const pf::Manifest m = pf::load_manifest(o.manifest);
  std::array<double, 3> ratios{};
  {
    std::istringstream in(o.ratios);
    std::string item;
    std::size_t k = 0;
    while (std::getline(in, item, ',')) {
      if (k >= 3)
        throw pf::ArgumentError("--ratios: expected three values: " + o.ratios);
      try {
        std::size_t pos = 0;
        ratios[k++] = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw pf::ArgumentError("--ratios: bad value: " + item);
      }
    }
    if (k != 3)
      throw pf::ArgumentError("--ratios: expected three values: " + o.ratios);
  }
  const std::uint64_t seed = resolve_seed(g, nullptr, 0);
  const pf::Manifest out_m = pf::split_manifest(m, ratios, seed);
  pf::save_manifest(out_m, o.out);
  info(g, "split: " + split_counts(out_m) + " -> " + o.out);
}

// --- features --------------------------------------------------------------

struct FeaturesOpts {
  std::string wav;
  std::string out_prefix;
  std::string manifest;
  std::string out;
  std::string features_dir;
};

pf::Mat<Real> col_matrix(const std::vector<Real>& v) {
  pf::Mat<Real> m(static_cast<pf::index_t>(v.size()), 1);
  for (pf::index_t i = 0; i < m.rows(); ++i)
    m(i, 0) = v[static_cast<std::size_t>(i)];
  return m;
}

void run_features_extract(Globals& g, const FeaturesOpts& o) {
  pf::DspConfig dsp;
  pf::apply_dsp_config(g.cfg(), dsp);
  dsp.validate();

  const bool single = !o.wav.empty() || !o.out_prefix.empty();
  const bool batch = !o.manifest.empty() || !o.out.empty();
  if (single == batch)
    throw pf::UsageError(
        "features extract: use either --wav with --out-prefix or --manifest "
        "with --out");

  if (single) {
    if (o.wav.empty() || o.out_prefix.empty())
      throw pf::UsageError(
          "features extract: --wav and --out-prefix go together");
    const auto w = pf::read_wav<Real>(o.wav);
    const auto mel = pf::mel_spectrogram(w, dsp);
    pf::save_matrix(o.out_prefix + ".mel.mat", mel);
    pf::save_matrix(o.out_prefix + ".pitch.mat",
                    col_matrix(pf::extract_pitch(w, dsp)));
    pf::save_matrix(o.out_prefix + ".energy.mat",
                    col_matrix(pf::extract_energy(w, dsp)));
    info(g, "extract: " + std::to_string(mel.rows()) + " frames -> " +
                o.out_prefix + ".{mel,pitch,energy}.mat");
    return;
  }

  if (o.manifest.empty() || o.out.empty())
    throw pf::UsageError("features extract: --manifest and --out go together");
  if (o.features_dir.empty())
    throw pf::UsageError("features extract: --features-dir is required with "
                         "--manifest");
  pf::Manifest m = pf::load_manifest(o.manifest);
  std::filesystem::create_directories(o.features_dir);
  for (auto& r : m.records) {
    if (r.wav_path.empty())
      throw pf::FormatError("record " + r.id + ": no wav path to extract from");
    const auto w = pf::read_wav<Real>(r.wav_path);
    const auto mel = pf::mel_spectrogram(w, dsp);
    if (mel.rows() != r.total_frames())
      throw pf::AlignmentError(
          "record " + r.id + ": durations sum to " +
          std::to_string(r.total_frames()) + " frames, wav yields " +
          std::to_string(mel.rows()));
    const auto pitch = pf::extract_pitch(w, dsp);
    const auto energy = pf::extract_energy(w, dsp);
    // Phone pitch averages voiced frames only, keeping 0 as the unvoiced
    // sentinel; energy averages every frame.
    const auto pa = pf::phone_average(pitch, r.durations, true);
    const auto ea = pf::phone_average(energy, r.durations, false);
    r.pitch.assign(pa.begin(), pa.end());
    r.energy.assign(ea.begin(), ea.end());
    r.mel_path =
        (std::filesystem::path(o.features_dir) / (r.id + ".mel.mat")).string();
    pf::save_matrix(r.mel_path, mel);
  }
  m.dsp_config_hash = dsp.hash();
  pf::save_manifest(m, o.out);
  info(g, "extract: " + std::to_string(m.records.size()) + " records -> " +
              o.out);
}

// --- train -----------------------------------------------------------------

struct TrainOpts {
  std::string manifest;
  std::string split = "train";
  std::string eval_split = "val";
  std::string checkpoint;
  std::string resume;
  std::string log;
  // -1 means "not given on the command line"; the config file or the
  // TrainConfig default applies then.
  std::int64_t steps = -1;
  std::int64_t batch = -1;
  double lr = -1.0;
  std::string lr_mode;
  std::int64_t warmup = -1;
  std::int64_t eval_every = -1;
  std::string variant;
  std::int64_t hidden = 256;
  double dropout = 0.5;
};

pf::TrainConfig make_train_config(Globals& g, const TrainOpts& o) {
  pf::TrainConfig tc;
  pf::apply_train_config(g.cfg(), tc);
  if (o.steps >= 0) tc.max_steps = o.steps;
  if (o.batch >= 0) tc.batch_size = o.batch;
  if (o.lr >= 0.0) tc.fixed_lr = o.lr;
  if (!o.lr_mode.empty())
    tc.lr_mode = o.lr_mode == "noam" ? pf::LrMode::kNoam : pf::LrMode::kFixed;
  if (o.warmup >= 0) tc.warmup = o.warmup;
  if (o.eval_every >= 0) tc.eval_every = o.eval_every;
  tc.seed = resolve_seed(g, "train.seed", tc.seed);
  tc.checkpoint_path = o.checkpoint;
  tc.log_path = o.log;
  return tc;
}

void report_training(Globals& g, const pf::TrainHistory& hist,
                     std::int64_t at_step) {
  if (hist.steps.empty()) {
    info(g, "train: checkpoint already at step " + std::to_string(at_step) +
                ", nothing to do");
  } else {
    info(g, "train: ran " + std::to_string(hist.steps.size()) +
                " steps to step " + std::to_string(at_step) +
                ", final loss " + fmt6(hist.final_total()));
  }
}

void run_train_ffnn(Globals& g, const TrainOpts& o) {
  const pf::Manifest m = pf::load_manifest(o.manifest);
  const auto train_ex = pf::make_ffnn_examples<Real>(m, o.split);
  if (train_ex.empty())
    throw pf::UsageError("train ffnn: split '" + o.split + "' has no records");

  pf::TrainConfig tc = make_train_config(g, o);
  pf::RngState init = pf::RngState::derive(tc.seed, 0xB00);
  pf::Ffnn<Real> model(train_ex[0].visual.cols(), init,
                       static_cast<pf::index_t>(o.hidden), o.dropout);
  pf::AdamState<Real> adam(model.params());
  if (!o.resume.empty())
    pf::load_checkpoint(o.resume, model.params(), &adam, model.config_hash());

  std::vector<pf::FfnnExample<Real>> val_ex;
  bool val_built = false;
  const auto build_val = [&] {
    if (!val_built) {
      val_ex = pf::make_ffnn_examples<Real>(m, o.eval_split);
      val_built = true;
    }
  };

  pf::EvalFn eval_fn;
  if (tc.eval_every > 0) {
    build_val();
    if (val_ex.empty())
      throw pf::UsageError("train ffnn: eval split '" + o.eval_split +
                           "' has no records");
    eval_fn = [&](std::int64_t step) {
      auto rep = pf::evaluate_ffnn(model, val_ex, step);
      info(g, "eval step " + std::to_string(step) + ": pitch_mse " +
                  fmt6(rep.pitch_mse) + ", energy_mse " + fmt6(rep.energy_mse));
      return rep;
    };
  }

  const auto hist = pf::train_ffnn(model, adam, train_ex, tc, eval_fn);
  report_training(g, hist, adam.step_count());

  build_val();
  if (!val_ex.empty()) {
    const auto rep = pf::evaluate_ffnn(model, val_ex, adam.step_count());
    std::cout << pf::report_table({rep}).text;
  }
}

void run_train_seq(Globals& g, const TrainOpts& o, bool tts) {
  const std::string cmd = tts ? "train tts" : "train ped";
  const pf::Manifest m = pf::load_manifest(o.manifest);
  const pf::PhoneVocab vocab = pf::PhoneVocab::from_manifest(m);

  pf::ModelConfig mc;
  pf::apply_model_config(g.cfg(), mc);
  if (!o.variant.empty()) mc.variant = pf::variant_from(o.variant);
  mc.vocab = vocab.size();

  const bool need_visual = mc.variant != pf::Variant::kTextOnly;
  const auto train_ex =
      pf::make_seq_examples<Real>(m, o.split, vocab, need_visual, tts);
  if (train_ex.empty())
    throw pf::UsageError(cmd + ": split '" + o.split + "' has no records");
  if (need_visual) {
    // The model's visual width follows the data unless the config pins it.
    if (!g.cfg().has("model.visual_dim"))
      mc.visual_dim = train_ex[0].visual.cols();
    for (const auto& ex : train_ex) {
      if (ex.visual.cols() != mc.visual_dim)
        throw pf::UsageError(cmd + ": record " + ex.id + " has visual dim " +
                             std::to_string(ex.visual.cols()) +
                             ", model expects " +
                             std::to_string(mc.visual_dim));
    }
  }
  if (tts) {
    // Same policy for the decoder's mel width.
    if (!g.cfg().has("model.mel_bins")) mc.mel_bins = train_ex[0].mel.cols();
    for (const auto& ex : train_ex) {
      if (ex.mel.cols() != mc.mel_bins)
        throw pf::UsageError(cmd + ": record " + ex.id + " has " +
                             std::to_string(ex.mel.cols()) +
                             " mel bins, model expects " +
                             std::to_string(mc.mel_bins));
    }
  }

  pf::TrainConfig tc = make_train_config(g, o);
  pf::TtsModel<Real> model(mc, tc.seed);
  pf::AdamState<Real> adam(model.params());
  if (!o.resume.empty())
    pf::load_checkpoint(o.resume, model.params(), &adam, mc.hash());

  std::vector<pf::SeqExample<Real>> val_ex;
  bool val_built = false;
  const auto build_val = [&] {
    if (val_built) return;
    // Mel targets for evaluation only when every record of the split has one.
    bool val_mel = tts;
    if (tts) {
      for (const auto* r : m.split_view(o.eval_split)) {
        if (r->mel_path.empty() && r->mel_inline.size() == 0) {
          val_mel = false;
          break;
        }
      }
    }
    val_ex =
        pf::make_seq_examples<Real>(m, o.eval_split, vocab, need_visual,
                                    val_mel);
    val_built = true;
  };

  pf::EvalFn eval_fn;
  if (tc.eval_every > 0) {
    build_val();
    if (val_ex.empty())
      throw pf::UsageError(cmd + ": eval split '" + o.eval_split +
                           "' has no records");
    eval_fn = [&](std::int64_t step) {
      auto rep = tts ? pf::evaluate_tts(model, val_ex, false, step)
                     : pf::evaluate_ped(model, val_ex, step);
      info(g, "eval step " + std::to_string(step) + ": pitch_mse " +
                  fmt6(rep.pitch_mse) + ", energy_mse " + fmt6(rep.energy_mse) +
                  ", duration_mse " + fmt6(rep.duration_mse));
      return rep;
    };
  }

  const auto hist = tts ? pf::train_tts(model, adam, train_ex, tc, eval_fn)
                        : pf::train_ped(model, adam, train_ex, tc, eval_fn);
  report_training(g, hist, adam.step_count());

  build_val();
  if (!val_ex.empty()) {
    const auto rep = tts
                         ? pf::evaluate_tts(model, val_ex, false,
                                            adam.step_count())
                         : pf::evaluate_ped(model, val_ex, adam.step_count());
    std::cout << pf::report_table({rep}).text;
  }
}

// --- eval ------------------------------------------------------------------

struct EvalOpts {
  std::string manifest;
  std::string checkpoint;
  std::string split = "val";
  std::string variant;
  bool gt_ped = false;
  bool csv = false;
};

void run_eval(Globals& g, const EvalOpts& o, bool tts) {
  const pf::Manifest m = pf::load_manifest(o.manifest);
  const pf::PhoneVocab vocab = pf::PhoneVocab::from_manifest(m);

  pf::ModelConfig mc;
  pf::apply_model_config(g.cfg(), mc);
  if (!o.variant.empty()) mc.variant = pf::variant_from(o.variant);
  mc.vocab = vocab.size();

  const bool need_visual = mc.variant != pf::Variant::kTextOnly;
  bool with_mel = tts;
  if (tts) {
    for (const auto* r : m.split_view(o.split)) {
      if (r->mel_path.empty() && r->mel_inline.size() == 0) {
        with_mel = false;
        break;
      }
    }
  }
  const auto ex =
      pf::make_seq_examples<Real>(m, o.split, vocab, need_visual, with_mel);
  if (ex.empty())
    throw pf::UsageError("eval: split '" + o.split + "' has no records");
  if (need_visual && !g.cfg().has("model.visual_dim"))
    mc.visual_dim = ex[0].visual.cols();
  if (with_mel && !g.cfg().has("model.mel_bins"))
    mc.mel_bins = ex[0].mel.cols();

  pf::TtsModel<Real> model(mc, 0);
  pf::load_checkpoint(o.checkpoint, model.params(),
                      static_cast<pf::AdamState<Real>*>(nullptr), mc.hash());

  const auto rep = tts ? pf::evaluate_tts(model, ex, o.gt_ped)
                       : pf::evaluate_ped(model, ex);
  if (tts && !rep.has_log_f0 && !rep.log_f0_skip_reason.empty())
    info(g, "log-F0 RMSE skipped: " + rep.log_f0_skip_reason);
  const auto table = pf::report_table({rep});
  std::cout << (o.csv ? table.csv : table.text);
}

// --- gradcheck -------------------------------------------------------------

void run_gradcheck(Globals& g, double tolerance) {
  const std::uint64_t seed = resolve_seed(g, nullptr, pf::kSuiteSeed);
  const auto results = pf::run_gradient_suite(seed, tolerance);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  max_rel "
              << fmt6(r.max_rel) << "  (worst " << r.worst_param << ")\n";
    all = all && r.pass;
  }
  if (!all)
    throw pf::EvaluationError("gradient suite failed at tolerance " +
                              fmt6(tolerance));
}

// --- plot ------------------------------------------------------------------

struct PlotOpts {
  std::string in;
  std::string out;
  std::string title;
  std::string x_label;
  std::string y_label;
};

void run_plot_contour(Globals& g, const PlotOpts& o) {
  std::ifstream f(o.in, std::ios::binary);
  if (!f) throw pf::IoError("cannot open " + o.in);
  std::stringstream ss;
  ss << f.rdbuf();
  pf::ContourPlot plot = pf::parse_contour_csv(ss.str());
  plot.title = o.title;
  if (!o.x_label.empty()) plot.x_label = o.x_label;
  if (!o.y_label.empty()) plot.y_label = o.y_label;
  pf::write_contour(plot, o.out);
  info(g, "plot: " + std::to_string(plot.series.size()) + " series -> " +
              o.out);
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"visual-text prosody toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", g.config_path,
                 "experiment config file (key = value lines)");
  app.add_option("--seed", g.seed,
                 "seed override (beats config and PROSOFUSE_SEED)")
      ->each([&](const std::string&) { g.seed_set = true; });
  app.add_flag("--no-timestamps", g.no_timestamps,
               "plain progress lines, byte-reproducible output");

  // prep
  auto* prep = app.add_subcommand("prep", "corpus preparation");
  prep->require_subcommand(1);
  prep->fallthrough();

  PrepSynthOpts synth_o;
  auto* synth =
      prep->add_subcommand("synth", "generate the synthetic audiovisual corpus");
  synth->fallthrough();
  synth->add_option("--out", synth_o.out, "manifest output path")->required();
  synth->add_option("--features-dir", synth_o.features_dir,
                    "feature matrix directory (default: <out>.features)");
  synth->callback([&] { run_prep_synth(g, synth_o); });

  std::string stats_manifest, stats_out;
  auto* stats =
      prep->add_subcommand("stats", "phone-level moments of the train split");
  stats->fallthrough();
  stats->add_option("--manifest", stats_manifest, "input manifest")->required();
  stats->add_option("--out", stats_out, "stats JSON output")->required();
  stats->callback([&] { run_prep_stats(g, stats_manifest, stats_out); });

  PrepFilterOpts filter_o;
  auto* filter =
      prep->add_subcommand("filter", "drop outlier records by phone statistics");
  filter->fallthrough();
  filter->add_option("--manifest", filter_o.manifest, "input manifest")
      ->required();
  filter->add_option("--stats", filter_o.stats, "stats JSON from prep stats")
      ->required();
  filter->add_option("--out", filter_o.out, "filtered manifest output")
      ->required();
  filter->add_option("--removed", filter_o.removed,
                     "optional CSV listing removed records");
  filter->callback([&] { run_prep_filter(g, filter_o); });

  PrepSplitOpts split_o;
  auto* split = prep->add_subcommand("split", "assign train/val/test splits");
  split->fallthrough();
  split->add_option("--manifest", split_o.manifest, "input manifest")
      ->required();
  split->add_option("--out", split_o.out, "re-split manifest output")
      ->required();
  split->add_option("--ratios", split_o.ratios,
                    "train,val,test fractions summing to 1");
  split->callback([&] { run_prep_split(g, split_o); });

  // features
  auto* features = app.add_subcommand("features", "acoustic feature extraction");
  features->require_subcommand(1);
  features->fallthrough();

  FeaturesOpts feat_o;
  auto* extract = features->add_subcommand(
      "extract", "mel, pitch and energy from wav audio");
  extract->fallthrough();
  extract->add_option("--wav", feat_o.wav, "single wav file input");
  extract->add_option("--out-prefix", feat_o.out_prefix,
                      "output prefix for single-file mode");
  extract->add_option("--manifest", feat_o.manifest,
                      "manifest whose records carry wav paths");
  extract->add_option("--out", feat_o.out,
                      "manifest output with targets and mel paths filled");
  extract->add_option("--features-dir", feat_o.features_dir,
                      "directory for extracted mel matrices");
  extract->callback([&] { run_features_extract(g, feat_o); });

  // train
  auto* train = app.add_subcommand("train", "model training");
  train->require_subcommand(1);
  train->fallthrough();

  TrainOpts train_o;
  const auto add_train_common = [&](CLI::App* c, bool seq) {
    c->fallthrough();
    c->add_option("--manifest", train_o.manifest, "training manifest")
        ->required();
    c->add_option("--split", train_o.split, "training split name");
    c->add_option("--eval-split", train_o.eval_split, "evaluation split name");
    c->add_option("--checkpoint", train_o.checkpoint,
                  "checkpoint written after the last step");
    c->add_option("--resume", train_o.resume, "checkpoint to continue from");
    c->add_option("--log", train_o.log, "JSON-lines step log");
    c->add_option("--steps", train_o.steps,
                  "optimizer step budget (a resumed run trains up to it)");
    c->add_option("--batch", train_o.batch, "batch size");
    c->add_option("--lr", train_o.lr, "fixed learning rate");
    c->add_option("--lr-mode", train_o.lr_mode, "fixed or noam")
        ->check(CLI::IsMember({"fixed", "noam"}));
    c->add_option("--warmup", train_o.warmup, "noam warmup steps");
    c->add_option("--eval-every", train_o.eval_every,
                  "eval cadence in steps (0 = never)");
    if (seq)
      c->add_option("--variant", train_o.variant, "model variant")
          ->check(CLI::IsMember(
              {"text_only", "pool_fusion", "cross_attn_fusion"}));
  };

  auto* train_ffnn = train->add_subcommand(
      "ffnn", "visual-feature regressor for chunked prosody targets");
  add_train_common(train_ffnn, false);
  train_ffnn->add_option("--hidden", train_o.hidden, "hidden layer width");
  train_ffnn->add_option("--dropout", train_o.dropout, "dropout rate");
  train_ffnn->callback([&] { run_train_ffnn(g, train_o); });

  auto* train_ped = train->add_subcommand(
      "ped", "prosody predictors with the decoder detached");
  add_train_common(train_ped, true);
  train_ped->callback([&] { run_train_seq(g, train_o, false); });

  auto* train_tts = train->add_subcommand("tts", "full synthesis model");
  add_train_common(train_tts, true);
  train_tts->callback([&] { run_train_seq(g, train_o, true); });

  // eval
  auto* eval = app.add_subcommand("eval", "checkpoint evaluation");
  eval->require_subcommand(1);
  eval->fallthrough();

  EvalOpts eval_o;
  const auto add_eval_common = [&](CLI::App* c) {
    c->fallthrough();
    c->add_option("--manifest", eval_o.manifest, "evaluation manifest")
        ->required();
    c->add_option("--checkpoint", eval_o.checkpoint, "model checkpoint")
        ->required();
    c->add_option("--split", eval_o.split, "split to evaluate");
    c->add_option("--variant", eval_o.variant, "model variant")
        ->check(
            CLI::IsMember({"text_only", "pool_fusion", "cross_attn_fusion"}));
    c->add_flag("--csv", eval_o.csv, "CSV instead of the text table");
  };

  auto* eval_ped = eval->add_subcommand("ped", "prosody prediction metrics");
  add_eval_common(eval_ped);
  eval_ped->callback([&] { run_eval(g, eval_o, false); });

  auto* eval_tts =
      eval->add_subcommand("tts", "synthesis metrics (MCD, log-F0 RMSE)");
  add_eval_common(eval_tts);
  eval_tts->add_flag("--gt-ped", eval_o.gt_ped,
                     "feed ground-truth prosody into the embedding stage");
  eval_tts->callback([&] { run_eval(g, eval_o, true); });

  // gradcheck
  double gradcheck_tolerance = 1e-4;
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "finite-difference gradient suite over every variant");
  gradcheck->fallthrough();
  gradcheck->add_option("--tolerance", gradcheck_tolerance,
                        "max relative error allowed");
  gradcheck->callback([&] { run_gradcheck(g, gradcheck_tolerance); });

  // plot
  auto* plot = app.add_subcommand("plot", "artifact plotting");
  plot->require_subcommand(1);
  plot->fallthrough();

  PlotOpts plot_o;
  auto* contour =
      plot->add_subcommand("contour", "SVG contour plot from a series CSV");
  contour->fallthrough();
  contour->add_option("--in", plot_o.in,
                      "CSV with a frame column and one column per series")
      ->required();
  contour->add_option("--out", plot_o.out, "SVG output path (CSV sidecar "
                      "written next to it)")
      ->required();
  contour->add_option("--title", plot_o.title, "plot title");
  contour->add_option("--x-label", plot_o.x_label, "x axis label");
  contour->add_option("--y-label", plot_o.y_label, "y axis label");
  contour->callback([&] { run_plot_contour(g, plot_o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const pf::UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
