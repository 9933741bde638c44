// Copyright 2026 The transrank Authors
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

// Simulates one primary and three secondary attributes, two of them close
// to the primary, then compares the primary-only fit with the transfer
// fits.

#include <cstdio>
#include <set>

#include "transrank/transrank.hpp"

int main() {
  using namespace transrank;
  constexpr int kObjects = 8;
  constexpr int kSecondary = 3;
  const SimTruth truth = gen_truth(kObjects, kSecondary, /*informative_count=*/2,
                                   /*h=*/0.1, /*seed=*/7);
  ComparisonDataset data;
  data.num_objects = kObjects;
  for (int i = 0; i < kObjects; ++i) data.object_names.push_back("obj" + std::to_string(i));
  for (int s = 0; s <= kSecondary; ++s) {
    data.attributes.push_back(gen_pairwise(truth, s, 600, derive_seed(7, s, 0)));
  }

  const MleFit primary = fit_bt(data.primary(), kObjects);
  const TransferFit oracle = fit_oracle(data, truth.informative);
  DiscoveryConfig config;
  config.seed = 11;
  const auto disc = fit_discovery(data, config);

  std::printf("informative (truth):");
  for (int s : truth.informative) std::printf(" %d", s);
  std::printf("\ninformative (found):");
  for (int s : disc.selection.selected) std::printf(" %d", s);
  std::printf("\n\n%-8s %8s %8s %8s %8s\n", "object", "truth", "bt", "oracle", "discov");
  for (int j = 0; j < kObjects; ++j) {
    std::printf("%-8s %8.3f %8.3f %8.3f %8.3f\n", data.object_names[j].c_str(),
                truth.alpha_star[j], primary.worths[j], oracle.alpha_hat[j],
                disc.fit.alpha_hat[j]);
  }
  std::printf("\nrms error: bt %.3f  oracle %.3f  discovery %.3f\n",
              rms_error(primary.worths, truth.alpha_star),
              rms_error(oracle.alpha_hat, truth.alpha_star),
              rms_error(disc.fit.alpha_hat, truth.alpha_star));

  const InferenceReport inf = infer(oracle.alpha_hat, build_graph(data.primary(), kObjects));
  std::printf("\n95%% intervals after debiasing:\n");
  for (int j = 0; j < kObjects; ++j) {
    std::printf("%-8s [%7.3f, %7.3f]\n", data.object_names[j].c_str(),
                inf.intervals[j].first, inf.intervals[j].second);
  }
  return 0;
}
