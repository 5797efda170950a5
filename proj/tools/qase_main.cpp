/*
 * Copyright 2026 The QASE Authors.
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

// qase: command-line front end. Exit status is 0 on success, 1 when a check
// or test fails, 2 on usage or I/O errors.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qase/adapter.hpp"
#include "qase/demo.hpp"
#include "qase/error.hpp"
#include "qase/json_io.hpp"
#include "qase/manifest.hpp"
#include "qase/mapping.hpp"
#include "qase/runner.hpp"
#include "qase/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::string default_store() {
  const char* env = std::getenv("QASE_STORE");
  return env && *env ? env : "qase-store";
}

int exit_code(qase::CaseStatus s) { return s == qase::CaseStatus::kPassed ? kOk : kFailed; }

int cmd_validate(const std::vector<std::string>& files, const std::string& card_path) {
  int rc = kOk;
  qase::ScenarioStore store;
  for (const auto& f : files) {
    qase::QAScenario s;
    try {
      s = qase::load_scenario(f);
    } catch (const qase::ParseError& e) {
      std::cerr << f << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
      rc = kUsage;
      continue;
    }
    const auto report = qase::validate_scenario(s);
    for (const auto& v : report) std::cout << f << ": " << v.field << ": " << v.message << "\n";
    if (report.empty()) {
      std::cout << f << ": ok (" << s.id << ")\n";
      store.add(std::move(s));
    } else if (rc == kOk) {
      rc = kFailed;
    }
  }
  if (!card_path.empty()) {
    const auto report = qase::validate_card(qase::load_card(card_path), store);
    for (const auto& v : report) std::cout << card_path << ": " << v.field << ": " << v.message << "\n";
    if (report.empty()) std::cout << card_path << ": ok\n";
    else if (rc == kOk) rc = kFailed;
  }
  return rc;
}

int cmd_plan(const std::vector<std::string>& files, const std::string& out) {
  std::vector<qase::QAScenario> scenarios;
  for (const auto& f : files) scenarios.push_back(qase::load_scenario(f));
  const qase::TestPlan plan = qase::build_test_plan(scenarios);
  if (out.empty()) {
    std::cout << qase::to_json(plan).dump(2) << "\n";
  } else {
    qase::save_plan(plan, out);
    std::cout << plan.id << " (" << plan.cases.size() << " cases) -> " << out << "\n";
  }
  return kOk;
}

struct RunArgs {
  std::string plan;
  std::string adapter;
  bool stub = false;
  std::string stub_config;
  std::string store;
  std::uint64_t seed = 0;
  std::string work_dir;
};

int cmd_run(const RunArgs& a) {
  const qase::TestPlan plan = qase::load_plan(a.plan);
  qase::EvidenceStore store(a.store);

  qase::RunOptions options;
  options.seed = a.seed;
  options.base_dir = fs::absolute(a.plan).parent_path();
  options.work_dir = a.work_dir.empty() ? store.root() / "work" / plan.id : fs::path(a.work_dir);

  qase::AdapterFactory factory;
  if (a.stub) {
    qase::StubConfig config;
    config.seed = a.seed;
    if (!a.stub_config.empty()) config = qase::stub_config_from_json(qase::read_json_file(a.stub_config));
    options.adapter_command = "stub " + qase::to_json(config).dump();
    factory = [config] { return std::make_unique<qase::StubAdapter>(config); };
  } else {
    const auto argv = qase::split_command_line(a.adapter);
    if (argv.empty()) throw CLI::ValidationError("--adapter", "empty command");
    options.adapter_command = a.adapter;
    factory = [argv] {
      return qase::ProcessAdapter::spawn(argv.front(), std::vector<std::string>(argv.begin() + 1, argv.end()));
    };
  }

  const qase::PlanRun run = qase::run_plan(plan, factory, &store, options);
  for (const auto& r : run.results) {
    std::cout << qase::to_string(r.status()) << "  " << r.test_case_id;
    if (r.error) std::cout << "  (" << *r.error << ")";
    std::cout << "\n";
  }
  std::cout << "overall " << qase::to_string(run.report.overall) << "; report "
            << (store.plan_dir(plan.id) / "report.md").string() << "\n";
  return exit_code(run.report.overall);
}

int cmd_report(const std::string& plan_id, const std::string& store_dir) {
  if (!fs::exists(fs::path(store_dir) / "plans" / plan_id)) {
    throw qase::StoreError("no plan " + plan_id + " in store " + store_dir);
  }
  qase::EvidenceStore store(store_dir);
  const qase::Report report = qase::report_from_store(store, plan_id);
  store.write_plan_file(plan_id, "report.md", report.markdown);
  store.write_plan_file(plan_id, "summary.json", report.summary.dump(2) + "\n");
  std::cout << report.markdown;
  return exit_code(report.overall);
}

int cmd_catalog(const std::string& attribute, const std::string& dir) {
  qase::Catalog catalog = qase::Catalog::builtin();
  if (!dir.empty()) catalog.load_dir(dir);
  std::vector<qase::CatalogEntry> entries =
      attribute.empty() ? catalog.entries() : catalog.lookup(qase::QualityAttribute::parse(attribute));
  for (const auto& e : entries) {
    std::cout << e.name << "  [" << e.quality_attribute.str() << "]\n  " << e.documentation << "\n";
    for (const auto& c : e.template_case.conditions) std::cout << "  condition: " << qase::serialize_condition(c) << "\n";
  }
  return kOk;
}

int cmd_perturb(const std::string& manifest_path, const std::vector<double>& blur, bool drop, const std::string& out,
                std::uint64_t seed) {
  if (blur.empty() == !drop) throw CLI::ValidationError("perturb", "give exactly one of --blur or --drop-channels");
  qase::TransformSpec spec;
  if (drop) {
    spec.kind = qase::TransformSpec::Kind::kChannelDrop;
    spec.channels = {0, 1, 2};
  } else {
    spec.kind = qase::TransformSpec::Kind::kBlur;
    spec.sigmas = blur;
  }
  qase::ValidationReport report;
  qase::check_transform(spec, "transform", report);
  if (!report.empty()) throw CLI::ValidationError(report.front().field, report.front().message);
  const auto suite = qase::generate_perturbation_suite(qase::load_manifest(manifest_path), spec, out, seed);
  for (const auto& d : suite) {
    std::cout << d.level << "  " << d.manifest.entries.size() << " images  " << d.manifest_path.string() << "\n";
  }
  return kOk;
}

int cmd_demo(const std::string& out) {
  const qase::DemoLayout d = qase::write_demo(out);
  std::cout << "demo written to " << d.root.string() << "\n  plan: " << d.plan.string() << "\n  run:  qase run "
            << d.plan.string() << " --stub --seed 7\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-attribute scenario test harness for ML models"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string out, card, attribute, catalog_dir, plan_id;
  std::string store = default_store();
  RunArgs run;
  run.store = store;
  std::vector<double> blur;
  bool drop = false;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Check scenario files (and optionally a negotiation card)");
  validate->add_option("files", files, "Scenario files")->required()->check(CLI::ExistingFile);
  validate->add_option("--card", card, "Negotiation card to check against the scenarios")->check(CLI::ExistingFile);

  auto* plan = app.add_subcommand("plan", "Map scenarios to a test plan");
  plan->add_option("files", files, "Scenario files")->required()->check(CLI::ExistingFile);
  plan->add_option("-o,--out", out, "Plan file to write (default: print)");

  auto* runc = app.add_subcommand("run", "Run a test plan and store evidence");
  runc->add_option("plan", run.plan, "Plan file")->required()->check(CLI::ExistingFile);
  auto* adapter_opt = runc->add_option("--adapter", run.adapter, "Adapter command line");
  auto* stub_opt = runc->add_flag("--stub", run.stub, "Use the built-in deterministic stub model");
  adapter_opt->excludes(stub_opt);
  runc->add_option("--stub-config", run.stub_config, "Stub configuration JSON")->check(CLI::ExistingFile)->needs(stub_opt);
  runc->add_option("--store", run.store, "Evidence store directory (default: $QASE_STORE or ./qase-store)");
  runc->add_option("--seed", run.seed, "Run seed");
  runc->add_option("--work-dir", run.work_dir, "Directory for derived datasets");

  auto* report = app.add_subcommand("report", "Regenerate the report of a stored plan");
  report->add_option("plan_id", plan_id, "Plan id")->required();
  report->add_option("--store", store, "Evidence store directory");

  auto* catalog = app.add_subcommand("catalog", "List test catalog entries");
  catalog->add_option("--attribute", attribute, "Quality attribute tag");
  catalog->add_option("--catalog-dir", catalog_dir, "Directory of extra entries")->check(CLI::ExistingDirectory);

  auto* perturb = app.add_subcommand("perturb", "Generate a perturbation suite from a manifest");
  std::string manifest;
  perturb->add_option("manifest", manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  perturb->add_option("--blur", blur, "Three blur sigmas")->delimiter(',')->expected(3);
  perturb->add_flag("--drop-channels", drop, "Drop the red, green and blue channels in turn");
  perturb->add_option("--out", out, "Output directory")->required();
  perturb->add_option("--seed", seed, "Seed");

  auto* demo = app.add_subcommand("demo", "Write a self-contained example plan and dataset");
  demo->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(files, card);
    if (*plan) return cmd_plan(files, out);
    if (*runc) {
      if (!run.stub && run.adapter.empty()) throw CLI::ValidationError("run", "give --adapter <command> or --stub");
      return cmd_run(run);
    }
    if (*report) return cmd_report(plan_id, store);
    if (*catalog) return cmd_catalog(attribute, catalog_dir);
    if (*perturb) return cmd_perturb(manifest, blur, drop, out, seed);
    if (*demo) return cmd_demo(out);
  } catch (const CLI::Error& e) {
    std::cerr << "qase: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qase: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
