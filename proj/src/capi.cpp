#include "qps/qps.h"

#include <cstring>
#include <string>

#include "qps/harness.hpp"

struct qps_config {
  qps::ExperimentConfig cfg;
};

struct qps_curve {
  qps::LearningCurve curve;
};

struct qps_result {
  std::vector<qps_curve> curves;
};

namespace {

thread_local std::string g_last_error;

qps_status fail(qps_status code, const char* what) {
  g_last_error = what != nullptr ? what : "unknown error";
  return code;
}

// Config diagnostics always map to QPS_ERROR_PARSE; anything else thrown by
// `fn` maps to `error_code`.
template <typename Fn>
qps_status guarded(qps_status error_code, Fn&& fn) {
  try {
    fn();
    return QPS_OK;
  } catch (const qps::ConfigError& e) {
    return fail(QPS_ERROR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(error_code, e.what());
  } catch (...) {
    return fail(error_code, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qps_last_error(void) { return g_last_error.c_str(); }

qps_status qps_config_create(qps_config** out) {
  if (out == nullptr) return fail(QPS_ERROR_INVALID_ARGUMENT, "out is null");
  *out = new qps_config{};
  return QPS_OK;
}

qps_status qps_config_parse(const char* text, qps_config** out) {
  if (text == nullptr || out == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(QPS_ERROR_PARSE, [&] { *out = new qps_config{qps::parse_config(text)}; });
}

qps_status qps_config_parse_file(const char* path, qps_config** out) {
  if (path == nullptr || out == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(QPS_ERROR_PARSE, [&] { *out = new qps_config{qps::parse_config_file(path)}; });
}

qps_status qps_config_set(qps_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded(QPS_ERROR_PARSE, [&] {
    // Route through the file parser so validation and diagnostics match.
    const std::string text =
        qps::resolved_config_text(config->cfg) + std::string(key) + " = " + value + "\n";
    config->cfg = qps::parse_config(text);
  });
}

qps_status qps_config_resolved_text(const qps_config* config, char** out) {
  if (config == nullptr || out == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  *out = copy_string(qps::resolved_config_text(config->cfg));
  if (*out == nullptr) return fail(QPS_ERROR_RUNTIME, "allocation failed");
  return QPS_OK;
}

void qps_config_free(qps_config* config) { delete config; }

qps_status qps_run(const qps_config* config, int threads, qps_result** out) {
  if (config == nullptr || out == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  if (threads < 1) return fail(QPS_ERROR_INVALID_ARGUMENT, "threads must be at least 1");
  *out = nullptr;
  return guarded(QPS_ERROR_RUNTIME, [&] {
    qps::EnsembleResult res = qps::run_ensemble(config->cfg, threads);
    auto* result = new qps_result{};
    for (auto& curve : res.curves) result->curves.push_back(qps_curve{std::move(curve)});
    *out = result;
  });
}

void qps_result_free(qps_result* result) { delete result; }

int qps_result_curve_count(const qps_result* result) {
  return result == nullptr ? 0 : static_cast<int>(result->curves.size());
}

const qps_curve* qps_result_curve(const qps_result* result, int index) {
  if (result == nullptr || index < 0 || index >= static_cast<int>(result->curves.size()))
    return nullptr;
  return &result->curves[static_cast<std::size_t>(index)];
}

int qps_curve_trial_count(const qps_curve* curve) {
  return curve == nullptr ? 0 : static_cast<int>(curve->curve.rows.size());
}

int qps_curve_percept_count(const qps_curve* curve) {
  return curve == nullptr ? 0 : curve->curve.n_percepts;
}

double qps_curve_mean(const qps_curve* curve, int trial) {
  if (curve == nullptr || trial < 0 || trial >= qps_curve_trial_count(curve)) return 0.0;
  return curve->curve.rows[static_cast<std::size_t>(trial)].mean;
}

double qps_curve_std(const qps_curve* curve, int trial) {
  if (curve == nullptr || trial < 0 || trial >= qps_curve_trial_count(curve)) return 0.0;
  return curve->curve.rows[static_cast<std::size_t>(trial)].stddev;
}

double qps_curve_percept_mean(const qps_curve* curve, int trial, int percept) {
  if (curve == nullptr || trial < 0 || trial >= qps_curve_trial_count(curve)) return 0.0;
  const auto& row = curve->curve.rows[static_cast<std::size_t>(trial)];
  if (percept < 0 || percept >= static_cast<int>(row.percept_mean.size())) return 0.0;
  return row.percept_mean[static_cast<std::size_t>(percept)];
}

qps_status qps_curve_write_csv(const qps_curve* curve, const char* path) {
  if (curve == nullptr || path == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded(QPS_ERROR_IO, [&] { qps::write_csv_file(curve->curve, path); });
}

qps_status qps_curve_write_svg(const qps_curve* curve, const char* path) {
  if (curve == nullptr || path == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded(QPS_ERROR_IO, [&] { qps::write_svg_file(curve->curve, path); });
}

qps_status qps_curve_csv_string(const qps_curve* curve, char** out) {
  if (curve == nullptr || out == nullptr)
    return fail(QPS_ERROR_INVALID_ARGUMENT, "null argument");
  *out = copy_string(qps::curve_to_csv(curve->curve));
  if (*out == nullptr) return fail(QPS_ERROR_RUNTIME, "allocation failed");
  return QPS_OK;
}

void qps_string_free(char* text) { std::free(text); }

}  // extern "C"
