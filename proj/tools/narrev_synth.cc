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


// narrev_synth: writes a generated corpus with planted paragraph labels.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "narrev/narrev.h"

int main(int argc, char **argv) {
  CLI::App app{"Generate an annotated corpus with planted labels"};
  size_t documents = 200;
  size_t paragraphs = 5;
  uint64_t seed = 7;
  std::string corpus;
  std::string truth;
  app.add_option("--documents", documents, "Number of documents");
  app.add_option("--paragraphs", paragraphs, "Paragraphs per document");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--corpus", corpus, "Output corpus (JSON Lines)")->required();
  app.add_option("--truth", truth, "Output planted labels (TSV)")->required();
  CLI11_PARSE(app, argc, argv);

  nlohmann::json opts = {
      {"documents", documents}, {"paragraphs_per_document", paragraphs}, {"seed", seed}};
  const narrev_status status =
      narrev_generate_synthetic(opts.dump().c_str(), corpus.c_str(), truth.c_str());
  if (status != NARREV_OK) {
    std::cerr << "narrev_synth: " << narrev_last_error() << "\n";
    return narrev_exit_code(status);
  }
  return 0;
}
