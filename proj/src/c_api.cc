// Copyright 2026 The Narrev Authors.
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


#include "narrev/narrev.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "narrev/error.h"
#include "narrev/events.h"
#include "narrev/logging.h"
#include "narrev/pipeline.h"
#include "narrev/synthetic.h"

struct narrev_pipeline {
  narrev::PipelineConfig config;
};

struct narrev_knowledge {
  narrev::EventCountTable table;
};

namespace {

thread_local std::string last_error;

narrev_status StatusFor(narrev::ErrorCode code) {
  switch (code) {
    case narrev::ErrorCode::kInvalidArgument: return NARREV_INVALID_ARGUMENT;
    case narrev::ErrorCode::kIo: return NARREV_IO_ERROR;
    case narrev::ErrorCode::kParse: return NARREV_PARSE_ERROR;
    case narrev::ErrorCode::kValidation: return NARREV_VALIDATION_ERROR;
    case narrev::ErrorCode::kUndefinedScore: return NARREV_UNDEFINED_SCORE;
    case narrev::ErrorCode::kRuntime: return NARREV_RUNTIME_ERROR;
  }
  return NARREV_RUNTIME_ERROR;
}

narrev_status Fail(narrev_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
narrev_status Guard(Fn &&fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const narrev::Error &e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return Fail(NARREV_RUNTIME_ERROR, "out of memory");
  } catch (const std::exception &e) {
    return Fail(NARREV_RUNTIME_ERROR, e.what());
  }
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char *narrev_version(void) { return "0.1.0"; }

const char *narrev_last_error(void) { return last_error.c_str(); }

void narrev_string_free(char *s) { std::free(s); }

int narrev_exit_code(narrev_status status) {
  switch (status) {
    case NARREV_OK: return 0;
    case NARREV_INVALID_ARGUMENT:
    case NARREV_PARSE_ERROR:
    case NARREV_VALIDATION_ERROR:
      return 1;
    default:
      return 2;
  }
}

narrev_status narrev_pipeline_create(const char *config_json, narrev_pipeline **out) {
  if (config_json == nullptr || out == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    auto p = std::make_unique<narrev_pipeline>();
    p->config = narrev::PipelineConfig::FromJson(config_json);
    narrev::SetLogLevel(p->config.log_level);
    *out = p.release();
    return NARREV_OK;
  });
}

void narrev_pipeline_destroy(narrev_pipeline *pipeline) { delete pipeline; }

narrev_status narrev_pipeline_config(const narrev_pipeline *pipeline, char **config_json) {
  if (pipeline == nullptr || config_json == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    *config_json = Dup(pipeline->config.ToJson());
    return NARREV_OK;
  });
}

narrev_status narrev_pipeline_run(narrev_pipeline *pipeline, const char *command,
                                  char **report) {
  if (pipeline == nullptr || command == nullptr || report == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  *report = nullptr;
  return Guard([&] {
    narrev::CommandResult result = narrev::RunCommand(command, pipeline->config);
    *report = Dup(result.report);
    if (result.exit_code == 0) return NARREV_OK;
    last_error = std::string(command) + " found invalid input";
    return result.exit_code == 1 ? NARREV_VALIDATION_ERROR : NARREV_RUNTIME_ERROR;
  });
}

narrev_status narrev_knowledge_load(const char *counts_path, narrev_knowledge **out) {
  if (counts_path == nullptr || out == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    auto k = std::make_unique<narrev_knowledge>();
    k->table = narrev::EventCountTable::Load(counts_path);
    *out = k.release();
    return NARREV_OK;
  });
}

void narrev_knowledge_destroy(narrev_knowledge *knowledge) { delete knowledge; }

narrev_status narrev_knowledge_pmi(const narrev_knowledge *knowledge, const char *a,
                                   const char *b, int d, double *out) {
  if (knowledge == nullptr || a == nullptr || b == nullptr || out == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  if (d < 1 || d > narrev::kMaxDistance) {
    return Fail(NARREV_INVALID_ARGUMENT, "distance must be 1, 2 or 3");
  }
  return Guard([&] {
    *out = narrev::Pmi(knowledge->table, a, b, d);
    return NARREV_OK;
  });
}

narrev_status narrev_knowledge_cp(const narrev_knowledge *knowledge, const char *a,
                                  const char *b, double *out) {
  if (knowledge == nullptr || a == nullptr || b == nullptr || out == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    *out = narrev::WeightedCp(knowledge->table, a, b).cp;
    return NARREV_OK;
  });
}

narrev_status narrev_knowledge_chain(const narrev_knowledge *knowledge,
                                     const char *const *events, size_t n, double *out) {
  if (knowledge == nullptr || events == nullptr || out == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    std::vector<std::string> chain;
    for (size_t i = 0; i < n; ++i) {
      if (events[i] == nullptr) throw narrev::InvalidArgument("null event");
      chain.emplace_back(events[i]);
    }
    *out = narrev::ChainScore(knowledge->table, chain);
    return NARREV_OK;
  });
}

narrev_status narrev_generate_synthetic(const char *options_json, const char *corpus_path,
                                        const char *truth_path) {
  if (corpus_path == nullptr || truth_path == nullptr) {
    return Fail(NARREV_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    narrev::SyntheticConfig cfg;
    if (options_json != nullptr) {
      nlohmann::json js;
      try {
        js = nlohmann::json::parse(options_json);
        for (const auto &[key, value] : js.items()) {
          if (key != "documents" && key != "paragraphs_per_document" && key != "seed") {
            throw narrev::Error(narrev::ErrorCode::kValidation,
                                "unknown generator option '" + key + "'");
          }
        }
        cfg.documents = js.value("documents", cfg.documents);
        cfg.paragraphs_per_document =
            js.value("paragraphs_per_document", cfg.paragraphs_per_document);
        cfg.seed = js.value("seed", cfg.seed);
      } catch (const nlohmann::json::exception &e) {
        throw narrev::Error(narrev::ErrorCode::kParse,
                            std::string("bad generator options: ") + e.what());
      }
    }
    const narrev::SyntheticCorpus corpus = narrev::GenerateSyntheticCorpus(cfg);
    std::ofstream docs(corpus_path, std::ios::binary);
    std::ofstream truth(truth_path, std::ios::binary);
    if (!docs || !truth) throw narrev::Error(narrev::ErrorCode::kIo, "cannot open output files");
    for (const narrev::DocumentRecord &d : corpus.documents) {
      docs << narrev::DocumentToJson(d) << '\n';
    }
    for (const auto &[id, kind] : corpus.truth) {
      truth << id << '\t' << narrev::PlantedKindName(kind) << '\t'
            << (narrev::IsNarrativeKind(kind) ? 1 : 0) << '\n';
    }
    if (!docs || !truth) throw narrev::Error(narrev::ErrorCode::kIo, "write failed");
    return NARREV_OK;
  });
}

}  // extern "C"
