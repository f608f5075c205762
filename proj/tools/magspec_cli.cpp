// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "magspec/plot.hpp"
#include "magspec/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"magspec: truncated magnetic operators, complex spectra, and eigenvalue-sum checks"};
  app.require_subcommand(1);

  std::string config_path, records_path, out_stem, csv_out;
  long long seed_override = -1;

  auto* cmd_run = app.add_subcommand("run", "execute a sweep described by a config file");
  cmd_run->add_option("config", config_path, "config file")->required();
  cmd_run->add_option("--seed", seed_override, "override the config seed");
  cmd_run->add_option("--out", out_stem, "override the output stem");

  auto* cmd_plot = app.add_subcommand("plot", "emit SVG plots for a record stream");
  cmd_plot->add_option("records", records_path, "record stream (.jsonl)")->required();
  cmd_plot->add_option("--out", out_stem, "output stem (default: records path)");

  auto* cmd_check = app.add_subcommand("check", "re-validate record invariants offline");
  cmd_check->add_option("records", records_path, "record stream (.jsonl)")->required();

  auto* cmd_report = app.add_subcommand("sweep-report", "empirical-constant table for a sweep");
  cmd_report->add_option("records", records_path, "record stream (.jsonl)")->required();
  cmd_report->add_option("--csv", csv_out, "also write the scalar projection here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      magspec::ExperimentConfig cfg = magspec::parse_config_file(config_path);
      if (seed_override >= 0) cfg.run.seed = static_cast<std::uint64_t>(seed_override);
      if (!out_stem.empty()) cfg.out_stem = out_stem;
      const magspec::RunOutput out = magspec::run(cfg);
      int errors = 0;
      for (const auto& r : out.records)
        if (!r.error.empty()) ++errors;
      std::printf("wrote %zu records to %s (%d errored), csv %s\n", out.records.size(),
                  out.jsonl_path.c_str(), errors, out.csv_path.c_str());
      return 0;
    }
    if (cmd_plot->parsed()) {
      const auto records = magspec::read_records(records_path);
      const std::string stem = out_stem.empty() ? records_path : out_stem;
      for (const auto& p : magspec::emit_plots(records, stem)) std::printf("wrote %s\n", p.c_str());
      return 0;
    }
    if (cmd_check->parsed()) {
      const auto records = magspec::read_records(records_path);
      const auto failures = magspec::check_records(records);
      for (const auto& f : failures) std::printf("FAIL %s\n", f.c_str());
      std::printf("%zu records checked, %zu failures\n", records.size(), failures.size());
      return failures.empty() ? 0 : 1;
    }
    if (cmd_report->parsed()) {
      const auto records = magspec::read_records(records_path);
      std::cout << magspec::sweep_report(records);
      if (!csv_out.empty()) {
        magspec::write_csv(records, csv_out);
        std::printf("wrote %s\n", csv_out.c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
