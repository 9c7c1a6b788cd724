// finmcp command line front end.
//
// Subcommands:
//   serve   - speak the stdio tool protocol against a fixture or HTTP provider
//   prep    - normalize a raw QA dataset and emit corpus statistics
//   bench   - run the tool-calling benchmark over a prepared dataset
//   eval    - judge benchmark runs for relevance, groundedness and accuracy
//   report  - aggregate evaluation output into tables and charts

#include "CLI11.hpp"

#include <finmcp/dataset.hpp>
#include <finmcp/evaluator.hpp>
#include <finmcp/http_provider.hpp>
#include <finmcp/provider.hpp>
#include <finmcp/report.hpp>
#include <finmcp/runner.hpp>
#include <finmcp/session.hpp>
#include <finmcp/tools.hpp>
#include <finmcp/util.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_serve(const std::string& provider_name, const std::string& fixtures_dir,
              const std::string& base_url, const std::string& token_env,
              const std::string& log_path, int max_periods) {
  std::unique_ptr<finmcp::Provider> provider;
  if (provider_name == "fixture") {
    provider = finmcp::make_fixture_provider(fixtures_dir);
  } else if (provider_name == "http") {
    finmcp::HttpProviderOptions opts;
    opts.base_url = base_url;
    opts.token_env = token_env;
    auto http = std::make_unique<finmcp::HttpProvider>(opts);
    http->refresh_directory();
    provider = std::move(http);
  } else {
    std::cerr << "unknown provider: " << provider_name << "\n";
    return 2;
  }

  finmcp::ToolSuiteOptions tool_opts;
  tool_opts.max_periods_per_call = max_periods;
  finmcp::ToolSuite suite(*provider, tool_opts);
  finmcp::RunLog log(log_path);
  finmcp::run_stdio_session(std::cin, std::cout, suite,
                            log_path.empty() ? nullptr : &log, {});
  return 0;
}

int run_prep(const std::string& input, const std::string& out_dir,
             const std::string& lexicon_path) {
  fs::create_directories(out_dir);
  finmcp::Reconciliation recon;
  auto records = finmcp::load_and_preprocess(input, &recon);

  std::vector<std::string> lexicon = lexicon_path.empty()
                                         ? finmcp::default_forward_lexicon()
                                         : finmcp::load_lexicon(lexicon_path);
  auto stats = finmcp::compute_corpus_stats(records, lexicon);

  finmcp::write_records_jsonl((fs::path(out_dir) / "records.jsonl").string(), records);
  finmcp::write_file_atomic((fs::path(out_dir) / "reconciliation.txt").string(),
                            recon.render_text());
  finmcp::write_file_atomic((fs::path(out_dir) / "stats.json").string(),
                            stats.to_json().dump(2) + "\n");

  std::cout << recon.render_text();
  return 0;
}

int run_bench(const std::string& dataset_path, const std::string& config_path,
              const std::string& out_dir, bool no_tools,
              const std::string& mock_script, int concurrency, int crash_after) {
  auto config = finmcp::RunConfig::load(config_path);
  auto records = finmcp::load_and_preprocess(dataset_path);

  finmcp::RunnerHooks hooks;
  hooks.no_tools = no_tools;
  hooks.crash_after = crash_after;

  finmcp::ChatClientFactory factory;
  if (!mock_script.empty()) {
    factory = finmcp::scripted_factory_from_file(mock_script);
    // Scripted runs use logical timestamps so output is byte reproducible.
    hooks.clock_factory = [](const std::string& qid) { return finmcp::logical_clock(qid); };
  } else {
    finmcp::HttpChatOptions http_opts;
    http_opts.endpoint = config.model;
    factory = [http_opts](const std::string&) -> std::unique_ptr<finmcp::ChatClient> {
      return std::make_unique<finmcp::HttpChatClient>(http_opts);
    };
  }

  auto provider = finmcp::make_fixture_provider(config.fixtures_dir);
  finmcp::run_benchmark(records, config, factory, *provider, out_dir, concurrency, hooks);

  // Evaluation joins runs back to ground truth, so keep the prepared
  // dataset next to the run output.
  finmcp::write_records_jsonl((fs::path(out_dir) / "dataset.jsonl").string(), records);
  std::cout << "wrote " << (fs::path(out_dir) / "runs.jsonl").string() << "\n";
  return 0;
}

int run_eval(const std::string& runs_dir, const std::string& out_dir,
             const std::string& config_path, const std::string& replay_dir,
             const std::string& judge_script, int concurrency) {
  auto records = finmcp::load_and_preprocess((fs::path(runs_dir) / "dataset.jsonl").string());

  std::vector<finmcp::RunRecord> runs;
  {
    auto text = finmcp::read_file((fs::path(runs_dir) / "runs.jsonl").string());
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (finmcp::trim(line).empty()) continue;
      runs.push_back(finmcp::RunRecord::from_json(json::parse(line)));
    }
  }

  finmcp::EvaluatorConfig config;
  if (!config_path.empty()) {
    auto run_config = finmcp::RunConfig::load(config_path);
    config.params = run_config.evaluator;
    config.seeds = run_config.judge_seeds;
    if (!run_config.prompts_dir.empty())
      config.prompts = finmcp::JudgePrompts::from_dir(run_config.prompts_dir);
  }

  finmcp::JudgeClientFactory factory;
  if (!replay_dir.empty()) {
    factory = finmcp::replay_judge_factory_from_file(
        (fs::path(replay_dir) / "judge_transcripts.jsonl").string());
  } else if (!judge_script.empty()) {
    factory = finmcp::scripted_judge_factory_from_file(judge_script);
  } else {
    if (config_path.empty())
      throw std::runtime_error("eval needs --config for a live judge endpoint");
    auto run_config = finmcp::RunConfig::load(config_path);
    finmcp::HttpChatOptions http_opts;
    http_opts.endpoint = run_config.judge;
    factory = [http_opts](const std::string&) -> std::unique_ptr<finmcp::JudgeClient> {
      return std::make_unique<finmcp::HttpJudgeClient>(http_opts);
    };
  }

  finmcp::evaluate_all(runs, records, factory, config, out_dir, concurrency);
  std::cout << "wrote " << (fs::path(out_dir) / "evals.jsonl").string() << "\n";
  return 0;
}

int run_report(const std::string& evals_dir, const std::string& dataset_path,
               const std::string& out_dir, const std::string& format,
               const std::string& stats_path, int n_floor) {
  auto records = finmcp::load_and_preprocess(dataset_path);

  std::vector<finmcp::EvalResult> evals;
  {
    auto text = finmcp::read_file((fs::path(evals_dir) / "evals.jsonl").string());
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (finmcp::trim(line).empty()) continue;
      evals.push_back(finmcp::EvalResult::from_json(json::parse(line)));
    }
  }

  finmcp::ReportOptions opts;
  opts.format = format;
  opts.n_floor = static_cast<size_t>(n_floor);

  finmcp::CorpusStats stats;
  if (!stats_path.empty()) {
    stats = finmcp::CorpusStats::from_json(json::parse(finmcp::read_file(stats_path)));
  } else {
    stats = finmcp::compute_corpus_stats(records, finmcp::default_forward_lexicon());
  }

  finmcp::emit_report(records, evals, stats, out_dir, opts);
  std::cout << "wrote report to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Financial statement tool server and benchmark harness"};
  app.require_subcommand(1);

  // serve
  std::string provider_name = "fixture";
  std::string fixtures_dir = "fixtures";
  std::string base_url = "http://127.0.0.1:8790";
  std::string token_env = "FINMCP_VENDOR_TOKEN";
  std::string serve_log;
  int serve_max_periods = 0;
  auto* serve = app.add_subcommand("serve", "Run the stdio tool server");
  serve->add_option("--provider", provider_name, "Data provider: fixture or http")
      ->check(CLI::IsMember({"fixture", "http"}));
  serve->add_option("--fixtures", fixtures_dir, "Fixture directory for the fixture provider");
  serve->add_option("--base-url", base_url, "Vendor base URL for the http provider");
  serve->add_option("--token-env", token_env,
                    "Name of the environment variable holding the vendor token");
  serve->add_option("--log", serve_log, "Append tool call records to this JSONL file");
  serve->add_option("--max-periods", serve_max_periods,
                    "Reject statement calls asking for more periods than this (0 = no cap)");

  // prep
  std::string prep_input, prep_out, prep_lexicon;
  auto* prep = app.add_subcommand("prep", "Normalize a raw QA dataset");
  prep->add_option("--input", prep_input, "Raw dataset (JSONL)")->required();
  prep->add_option("--out", prep_out, "Output directory")->required();
  prep->add_option("--lexicon", prep_lexicon, "Forward-looking word list (one per line)");

  // bench
  std::string bench_dataset, bench_config, bench_out, bench_mock;
  bool bench_no_tools = false;
  int bench_concurrency = 4;
  int bench_crash_after = 0;
  auto* bench = app.add_subcommand("bench", "Run the tool-calling benchmark");
  bench->add_option("--dataset", bench_dataset, "Prepared dataset (JSONL)")->required();
  bench->add_option("--config", bench_config, "Run configuration (JSON)")->required();
  bench->add_option("--out", bench_out, "Output directory")->required();
  bench->add_flag("--no-tools", bench_no_tools, "Run the model without tool access");
  bench->add_option("--mock-script", bench_mock, "Scripted model replies (JSON)");
  bench->add_option("--concurrency", bench_concurrency, "Parallel questions");
  bench->add_option("--crash-after", bench_crash_after,
                    "Exit abruptly after N fresh completions (resume testing)");

  // eval
  std::string eval_runs, eval_out, eval_config, eval_replay, eval_script;
  int eval_concurrency = 4;
  auto* eval = app.add_subcommand("eval", "Judge benchmark runs");
  eval->add_option("--runs", eval_runs, "Benchmark output directory")->required();
  eval->add_option("--out", eval_out, "Output directory")->required();
  eval->add_option("--config", eval_config, "Run configuration (JSON)");
  eval->add_option("--replay", eval_replay,
                   "Re-score from recorded judge transcripts in this directory");
  eval->add_option("--judge-script", eval_script, "Scripted judge replies (JSON)");
  eval->add_option("--concurrency", eval_concurrency, "Parallel questions");

  // report
  std::string report_evals, report_dataset, report_out, report_stats;
  std::string report_format = "csv";
  int report_floor = 30;
  auto* report = app.add_subcommand("report", "Aggregate evaluation output");
  report->add_option("--evals", report_evals, "Evaluation output directory")->required();
  report->add_option("--dataset", report_dataset, "Prepared dataset (JSONL)")->required();
  report->add_option("--out", report_out, "Output directory")->required();
  report->add_option("--format", report_format, "Table format: csv or md")
      ->check(CLI::IsMember({"csv", "md"}));
  report->add_option("--stats", report_stats, "Corpus statistics JSON from prep");
  report->add_option("--n-floor", report_floor, "Flag groups smaller than this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed())
      return run_serve(provider_name, fixtures_dir, base_url, token_env, serve_log,
                       serve_max_periods);
    if (prep->parsed()) return run_prep(prep_input, prep_out, prep_lexicon);
    if (bench->parsed())
      return run_bench(bench_dataset, bench_config, bench_out, bench_no_tools, bench_mock,
                       bench_concurrency, bench_crash_after);
    if (eval->parsed())
      return run_eval(eval_runs, eval_out, eval_config, eval_replay, eval_script,
                      eval_concurrency);
    if (report->parsed())
      return run_report(report_evals, report_dataset, report_out, report_format,
                        report_stats, report_floor);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
