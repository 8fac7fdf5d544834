// Copyright 2026 The muwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// muwork: certify mixed-unitary channels from the command line.
//
//   muwork info  CHANNEL.json
//   muwork mix   CHANNEL.json --seed N [--algebra auto|FILE] [--tol T] [--max-atoms M]
//   muwork power CHANNEL.json --seed N [--kmax K] [--tol T]
//   muwork corr  CORR.json --mode quadrature|rank|z2 [--tol T] [--seed N]
//   muwork selftest --seed N [--level quick|full]
//
// Exit codes: 0 success, 2 input error, 3 inconclusive, 4 numerical failure.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "muwork/cli/commands.hpp"

namespace {

using muwork::cli::json;

struct Common {
  std::string out_path;
  bool print_json = false;
  bool timing = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_path, "Write the JSON report to this file");
  sub->add_flag("--json", c.print_json, "Print the JSON report instead of text");
  sub->add_flag("--timing", c.timing, "Record wall-clock timing in the report");
}

int emit(const muwork::cli::Output& out, const Common& c) {
  const std::string body = out.report.dump(2) + "\n";
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << c.out_path << "\n";
      return muwork::cli::exit_input;
    }
    f << body;
  }
  std::cout << (c.print_json ? body : out.text);
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify mixed-unitary quantum channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", muwork::cli::kVersion);

  Common common;
  std::string input;

  auto* info = app.add_subcommand("info", "Channel flags, Choi spectrum, fixed algebra and spectrum");
  info->add_option("channel", input, "Channel JSON file")->required();
  add_common(info, common);

  muwork::cli::MixOptions mix_opt;
  std::string algebra_arg = "auto";
  auto* mix = app.add_subcommand("mix", "Decompose p*Phi + (1-p)*E_A into unitaries");
  mix->add_option("channel", input, "Channel JSON file")->required();
  mix->add_option("--algebra", algebra_arg, "'auto' (fixed-point algebra) or an algebra JSON file");
  mix->add_option("--tol", mix_opt.tol, "Residual target")->check(CLI::PositiveNumber);
  mix->add_option("--max-atoms", mix_opt.max_atoms, "Dictionary size cap")->check(CLI::PositiveNumber);
  mix->add_option("--seed", mix_opt.seed, "Random seed")->required();
  add_common(mix, common);

  muwork::cli::PowerOptions power_opt;
  auto* power = app.add_subcommand("power", "Smallest k with Phi^k certified mixed unitary");
  power->add_option("channel", input, "Channel JSON file")->required();
  power->add_option("--kmax", power_opt.kmax, "Largest power tried")->check(CLI::PositiveNumber);
  power->add_option("--tol", power_opt.tol, "Residual target")->check(CLI::PositiveNumber);
  power->add_option("--seed", power_opt.seed, "Random seed")->required();
  add_common(power, common);

  muwork::cli::CorrOptions corr_opt;
  double corr_tol = 0.0;
  std::uint64_t corr_seed = 0;
  auto* corr = app.add_subcommand("corr", "Rank-one decompositions of correlation matrices");
  corr->add_option("correlation", input, "Correlation JSON file")->required();
  corr->add_option("--mode", corr_opt.mode, "quadrature, rank or z2")
      ->check(CLI::IsMember({"quadrature", "rank", "z2"}));
  auto* corr_tol_opt = corr->add_option("--tol", corr_tol, "Residual target")->check(CLI::PositiveNumber);
  auto* corr_seed_opt = corr->add_option("--seed", corr_seed, "Random seed (rank mode)");
  add_common(corr, common);

  muwork::cli::SelftestOptions self_opt;
  auto* selftest = app.add_subcommand("selftest", "Moment and closed-form property suites");
  selftest->add_option("--level", self_opt.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  selftest->add_option("--seed", self_opt.seed, "Random seed")->required();
  add_common(selftest, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return muwork::cli::exit_input;
  }

  try {
    muwork::cli::Context ctx;
    ctx.tol_override = muwork::cli::tol_override_from_env();
    ctx.timing = common.timing;
    if (*selftest) return emit(muwork::cli::cmd_selftest(self_opt, ctx), common);

    const json doc = muwork::cli::load_json_file(input);
    if (*info) return emit(muwork::cli::cmd_info(input, doc, ctx), common);
    if (*mix) {
      if (algebra_arg != "auto") mix_opt.algebra = muwork::cli::load_json_file(algebra_arg);
      return emit(muwork::cli::cmd_mix(input, doc, mix_opt, ctx), common);
    }
    if (*power) return emit(muwork::cli::cmd_power(input, doc, power_opt, ctx), common);
    if (*corr) {
      if (*corr_tol_opt) corr_opt.tol = corr_tol;
      if (*corr_seed_opt) corr_opt.seed = corr_seed;
      return emit(muwork::cli::cmd_corr(input, doc, corr_opt, ctx), common);
    }
  } catch (const muwork::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return muwork::cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return muwork::cli::exit_numerical;
  }
  return muwork::cli::exit_input;
}
