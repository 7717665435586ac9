#include "realtori/realtori.h"

#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "realtori/jobs.hpp"
#include "realtori/moduli.hpp"
#include "realtori/spd_cone.hpp"

struct rt_spd {
  realtori::SpdMatrix y;
};

struct rt_result {
  std::string json;
  int exit_code = 0;
};

namespace {

thread_local std::string last_error;

rt_status record(rt_status s, const std::string& message) {
  last_error = message;
  return s;
}

rt_status from_kind(realtori::ErrorKind k) {
  switch (k) {
    case realtori::ErrorKind::InvalidInput: return RT_ERR_INPUT;
    case realtori::ErrorKind::Unsupported: return RT_ERR_UNSUPPORTED;
    case realtori::ErrorKind::Numerical: return RT_ERR_NUMERIC;
    case realtori::ErrorKind::Internal: return RT_ERR_INTERNAL;
  }
  return RT_ERR_INTERNAL;
}

template <class F>
rt_status guarded(F&& body) {
  try {
    return body();
  } catch (const realtori::Error& e) {
    return record(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return record(RT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(RT_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* rt_version(void) { return "0.1.0"; }

const char* rt_last_error(void) { return last_error.c_str(); }

rt_status rt_spd_create(size_t g, const double* entries, rt_spd** out) {
  if (!out || !entries || g == 0) return record(RT_ERR_INPUT, "rt_spd_create: null argument or g = 0");
  *out = nullptr;
  return guarded([&] {
    const auto n = static_cast<Eigen::Index>(g);
    realtori::Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    *out = new rt_spd{realtori::SpdMatrix(m)};
    return RT_OK;
  });
}

void rt_spd_destroy(rt_spd* y) { delete y; }

size_t rt_spd_dim(const rt_spd* y) { return y ? y->y.g() : 0; }

rt_status rt_spd_entries(const rt_spd* y, double* out) {
  if (!y || !out) return record(RT_ERR_INPUT, "rt_spd_entries: null argument");
  const auto n = static_cast<Eigen::Index>(y->y.g());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out[i * n + j] = y->y(i, j);
  return RT_OK;
}

rt_status rt_spd_reduce(const rt_spd* y, double* r_out, long long* a_out) {
  if (!y || !r_out || !a_out) return record(RT_ERR_INPUT, "rt_spd_reduce: null argument");
  return guarded([&] {
    const realtori::MinkowskiResult r = realtori::minkowski_reduce(y->y);
    const std::size_t g = y->y.g();
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j) {
        r_out[i * g + j] = r.R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        a_out[i * g + j] = realtori::to_ll(r.A(i, j));
      }
    return RT_OK;
  });
}

rt_status rt_spd_is_reduced(const rt_spd* y, double tol, int* out) {
  if (!y || !out) return record(RT_ERR_INPUT, "rt_spd_is_reduced: null argument");
  return guarded([&] {
    *out = realtori::is_minkowski_reduced(y->y, tol) ? 1 : 0;
    return RT_OK;
  });
}

rt_status rt_spd_equivalent(const rt_spd* y1, const rt_spd* y2, double tol, int* equivalent, long long* witness) {
  if (!y1 || !y2 || !equivalent) return record(RT_ERR_INPUT, "rt_spd_equivalent: null argument");
  return guarded([&] {
    const auto r = realtori::polarized_tori_equivalent(y1->y, y2->y, tol);
    if (r.verdict == realtori::Verdict::Undecided) {
      *equivalent = 0;
      return record(RT_UNDECIDED, r.note.empty() ? "search was capped" : r.note);
    }
    *equivalent = r.verdict == realtori::Verdict::Equivalent ? 1 : 0;
    if (witness && r.witness) {
      const std::size_t g = r.witness->rows();
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) witness[i * g + j] = realtori::to_ll((*r.witness)(i, j));
    }
    return RT_OK;
  });
}

rt_status rt_job_run(const char* request_json, const char* options_json, rt_result** out) {
  if (!request_json || !out) return record(RT_ERR_INPUT, "rt_job_run: null argument");
  *out = nullptr;
  return guarded([&] {
    realtori::JobOptions opts;
    if (options_json) {
      nlohmann::json o;
      try {
        o = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::exception& e) {
        return record(RT_ERR_INPUT, std::string("rt_job_run: invalid options JSON: ") + e.what());
      }
      if (!o.is_object()) return record(RT_ERR_INPUT, "rt_job_run: options must be a JSON object");
      try {
        if (o.contains("tol")) opts.tol = o.at("tol").get<double>();
        if (o.contains("eps")) opts.eps = o.at("eps").get<double>();
        if (o.contains("bound")) opts.bound = o.at("bound").get<long long>();
        if (o.contains("seed")) opts.seed = o.at("seed").get<unsigned long long>();
        if (o.contains("threads")) opts.threads = o.at("threads").get<int>();
        if (o.contains("cmd")) opts.default_cmd = o.at("cmd").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        return record(RT_ERR_INPUT, std::string("rt_job_run: bad option value: ") + e.what());
      }
    }
    const realtori::JobOutcome outcome = realtori::run_jobs(request_json, opts);
    *out = new rt_result{outcome.json, static_cast<int>(outcome.exit)};
    const auto status = static_cast<rt_status>(outcome.exit);
    if (status != RT_OK) last_error = "job finished with exit code " + std::to_string(static_cast<int>(outcome.exit));
    return status;
  });
}

const char* rt_result_json(const rt_result* r) { return r ? r->json.c_str() : ""; }

int rt_result_exit_code(const rt_result* r) { return r ? r->exit_code : static_cast<int>(RT_ERR_INPUT); }

void rt_result_destroy(rt_result* r) { delete r; }

const char* const* rt_job_commands(size_t* count) {
  static const std::vector<const char*> names = [] {
    std::size_t n = 0;
    const char* const* list = realtori::job_command_names(&n);
    std::vector<const char*> v(list, list + n);
    v.push_back(nullptr);
    return v;
  }();
  if (count) *count = names.size() - 1;
  return names.data();
}

}  // extern "C"
