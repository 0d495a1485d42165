// Command-line front end; talks to the simulator only through the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qps/qps.h"

namespace {

struct ConfigDeleter {
  void operator()(qps_config* c) const { qps_config_free(c); }
};
struct ResultDeleter {
  void operator()(qps_result* r) const { qps_result_free(r); }
};
using ConfigPtr = std::unique_ptr<qps_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<qps_result, ResultDeleter>;

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context << ": " << qps_last_error() << "\n";
  std::exit(1);
}

ConfigPtr load_config(const std::string& path) {
  qps_config* raw = nullptr;
  if (qps_config_parse_file(path.c_str(), &raw) != QPS_OK) die(path);
  return ConfigPtr(raw);
}

void write_outputs(const qps_result* result, const qps_config* config,
                   const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
    std::exit(1);
  }

  const int count = qps_result_curve_count(result);
  for (int i = 0; i < count; ++i) {
    const qps_curve* curve = qps_result_curve(result, i);
    const std::string stem = i == 0 ? "curve" : "curve" + std::to_string(i + 1);
    const auto csv_path = out_dir / (stem + ".csv");
    const auto svg_path = out_dir / (stem + ".svg");
    if (qps_curve_write_csv(curve, csv_path.string().c_str()) != QPS_OK) die(csv_path.string());
    if (qps_curve_write_svg(curve, svg_path.string().c_str()) != QPS_OK) die(svg_path.string());
  }

  char* resolved = nullptr;
  if (qps_config_resolved_text(config, &resolved) != QPS_OK) die("resolved config");
  std::ofstream out(out_dir / "resolved.cfg", std::ios::binary);
  out << resolved;
  qps_string_free(resolved);
  if (!out) {
    std::cerr << "error: cannot write " << (out_dir / "resolved.cfg") << "\n";
    std::exit(1);
  }
}

void run_and_write(const qps_config* config, int threads, const std::filesystem::path& out_dir) {
  qps_result* raw = nullptr;
  if (qps_run(config, threads, &raw) != QPS_OK) die("run");
  ResultPtr result(raw);
  write_outputs(result.get(), config, out_dir);
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> values;
  std::string current;
  for (char c : list) {
    if (c == ',') {
      if (!current.empty()) values.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) values.push_back(current);
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective-simulation learning curves for the invasion game"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", param, values_list;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "Run one experiment and write curve.csv / curve.svg");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--threads", threads, "worker threads (default: 1)")
      ->check(CLI::PositiveNumber);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Run the config once per value of one parameter");
  sweep->add_option("--config", config_path, "experiment config file")->required();
  sweep->add_option("--param", param, "config key to sweep")->required();
  sweep->add_option("--values", values_list, "comma-separated values")->required();
  sweep->add_option("--out", out_dir, "output directory (default: out)");
  sweep->add_option("--threads", threads, "worker threads (default: 1)")
      ->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand("validate", "Parse a config and echo it resolved");
  validate->add_option("--config", config_path, "experiment config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    ConfigPtr config = load_config(config_path);
    char* resolved = nullptr;
    if (qps_config_resolved_text(config.get(), &resolved) != QPS_OK) die("resolved config");
    std::cout << resolved;
    qps_string_free(resolved);
    return 0;
  }

  if (run->parsed()) {
    ConfigPtr config = load_config(config_path);
    run_and_write(config.get(), threads, out_dir);
    return 0;
  }

  // sweep
  const std::vector<std::string> values = split_values(values_list);
  if (values.empty()) {
    std::cerr << "error: --values is empty\n";
    return 1;
  }
  for (const std::string& value : values) {
    ConfigPtr config = load_config(config_path);
    if (qps_config_set(config.get(), param.c_str(), value.c_str()) != QPS_OK)
      die(param + " = " + value);
    run_and_write(config.get(), threads,
                  std::filesystem::path(out_dir) / (param + "=" + value));
  }
  return 0;
}
