// Copyright 2026 The fairgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// fairgraph: debiasing pipeline for fair node classification.
//
//   fairgraph synth   --config cfg.json --out data/
//   fairgraph vanilla --config cfg.json --out runs/vanilla
//   fairgraph mapping --config cfg.json --out runs/mapping --seeds 0,1,2
//   fairgraph ablate  --config cfg.json --out runs/wo-fe --ablation w/o-fe
//   fairgraph sweep   --config cfg.json --out runs/sweep --param lambda2
//   fairgraph attack  --config cfg.json --out runs/attack
//
// Exit codes: 0 every seed succeeded, 2 some seeds failed, 1 configuration
// or input error.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "fairgraph/csv.h"
#include "fairgraph/pipeline.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string seeds;
  std::string arch;
  std::string ablation;
  std::string param = "lambda2";
  std::string values;
  int jobs = 0;
};

int Fail(const absl::Status& status) {
  std::fprintf(stderr, "fairgraph: %s\n", status.ToString().c_str());
  return fairgraph::kExitConfigError;
}

absl::StatusOr<std::vector<double>> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v;
    if (!absl::SimpleAtod(part, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: '", std::string(part), "'"));
    }
    out.push_back(v);
  }
  return out;
}

absl::StatusOr<fairgraph::RunConfig> LoadConfig(const Flags& flags) {
  absl::StatusOr<std::string> text = fairgraph::ReadFile(flags.config);
  if (!text.ok()) return text.status();
  const std::string base =
      std::filesystem::path(flags.config).parent_path().string();
  absl::StatusOr<fairgraph::RunConfig> cfg =
      fairgraph::ParseRunConfig(*text, base);
  if (!cfg.ok()) return cfg.status();
  if (!flags.seeds.empty()) {
    cfg->seeds.clear();
    for (absl::string_view part :
         absl::StrSplit(flags.seeds, ',', absl::SkipEmpty())) {
      uint64_t seed;
      if (!absl::SimpleAtoi(part, &seed)) {
        return absl::InvalidArgumentError(
            absl::StrCat("--seeds: not a seed: '", std::string(part), "'"));
      }
      cfg->seeds.push_back(seed);
    }
  }
  if (!flags.arch.empty()) {
    absl::StatusOr<fairgraph::nn::Architecture> arch =
        fairgraph::ParseClassifierArch(flags.arch);
    if (!arch.ok()) return arch.status();
    cfg->classifier.arch = *arch;
  }
  if (!flags.ablation.empty()) {
    absl::StatusOr<fairgraph::Ablation> ablation =
        fairgraph::ParseAblation(flags.ablation);
    if (!ablation.ok()) return ablation.status();
    cfg->ablation = *ablation;
  }
  if (flags.jobs > 0) cfg->jobs = flags.jobs;
  absl::Status valid = cfg->Validate();
  if (!valid.ok()) return valid;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair node classification: feature and topology debiasing"};
  app.set_version_flag("--version", FAIRGRAPH_VERSION);
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out, "Output directory")->required();
    cmd->add_option("--seeds", flags.seeds, "Comma-separated seeds");
    cmd->add_option("--arch", flags.arch, "Classifier: gcn, sage or gin");
    cmd->add_option("--jobs", flags.jobs, "Worker threads");
  };
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic graph");
  CLI::App* vanilla =
      app.add_subcommand("vanilla", "Train without debiasing");
  CLI::App* mapping =
      app.add_subcommand("mapping", "Debias features and topology, then train");
  CLI::App* ablate = app.add_subcommand("ablate", "Run one ablation variant");
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one loss coefficient");
  CLI::App* attack =
      app.add_subcommand("attack", "Attribute inference leakage curves");
  for (CLI::App* cmd : {synth, vanilla, mapping, ablate, sweep, attack}) {
    add_common(cmd);
  }
  mapping->add_option("--ablation", flags.ablation,
                      "w/o-msk, w/o-re, w/o-fe or w/o-to");
  ablate->add_option("--ablation", flags.ablation,
                     "w/o-msk, w/o-re, w/o-fe or w/o-to")
      ->required();
  sweep->add_option("--param", flags.param, "lambda2, lambda3 or lambda4");
  sweep->add_option("--values", flags.values,
                    "Comma-separated values (default 0,1e-5,1e-3,1,1e3,1e5,1e7)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fairgraph::kExitConfigError;
  }

  absl::StatusOr<fairgraph::RunConfig> cfg = LoadConfig(flags);
  if (!cfg.ok()) return Fail(cfg.status());

  absl::StatusOr<int> code = absl::InternalError("no subcommand");
  if (synth->parsed()) {
    code = fairgraph::RunSynth(*cfg, flags.out);
  } else if (vanilla->parsed()) {
    code = fairgraph::RunAndWrite(*cfg, fairgraph::Variant::kVanilla,
                                  flags.out);
  } else if (mapping->parsed() || ablate->parsed()) {
    code = fairgraph::RunAndWrite(*cfg, fairgraph::Variant::kMapping,
                                  flags.out);
  } else if (sweep->parsed()) {
    std::vector<double> values = fairgraph::kDefaultSweepValues;
    if (!flags.values.empty()) {
      absl::StatusOr<std::vector<double>> parsed = ParseDoubles(flags.values);
      if (!parsed.ok()) return Fail(parsed.status());
      values = *parsed;
    }
    code = fairgraph::RunParamSweep(*cfg, flags.param, values, flags.out);
  } else if (attack->parsed()) {
    code = fairgraph::RunAttackSweep(*cfg, flags.out);
  }
  if (!code.ok()) return Fail(code.status());
  return *code;
}
