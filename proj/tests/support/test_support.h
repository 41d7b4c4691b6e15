// Copyright 2026 The Translationese Lab Authors.
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

// Shared helpers for the unit tests and the acceptance suite.

#ifndef TLAB_TESTS_SUPPORT_TEST_SUPPORT_H_
#define TLAB_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <map>
#include <string>
#include <vector>

#include "tlab/metrics.h"
#include "tlab/postag.h"

namespace tlab::testing {

// A translated sentence with a "however" connective and its parsed AMR.
extern const char kContrastSentence[];
extern const char kContrastAmr[];

// Five hand-tagged sentences in which every word has a single tag.
std::vector<TaggedSentence> ToyTreebank();

// A report carrying only the given values, with a fixed provenance shared
// by every fixture.
MetricReport FixtureReport(const std::string& name, double ttr,
                           size_t cohesive_count);
MetricReport FixtureReport(const std::string& name, double ttr,
                           size_t cohesive_count, double adp, double adv,
                           double det);

std::string EchoWorkerPath();
std::string CliPath();
std::string SourceDir();

// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string Join(const std::string& name) const;

 private:
  std::string path_;
};

void WriteText(const std::string& path, const std::string& contents);
std::string ReadText(const std::string& path);
std::string ShellQuote(const std::string& text);

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the translationese-lab binary with `args` inside `cwd`. `env` adds
// or, with an empty value, removes environment variables.
CommandResult RunCli(const std::vector<std::string>& args,
                     const std::string& cwd,
                     const std::map<std::string, std::string>& env = {});

// Backend spec text for the echo worker with extra worker flags.
std::string EchoBackendSpec(const std::string& id,
                            const std::string& worker_flags,
                            double timeout_seconds = 10, int batch_size = 4,
                            int max_in_flight = 2, int max_retries = 2);

}  // namespace tlab::testing

#endif  // TLAB_TESTS_SUPPORT_TEST_SUPPORT_H_
