#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qfslice/bq.hpp"
#include "qfslice/slicescan.hpp"

namespace qfslice::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kVerifyFailed = 3 };

struct RunConfig {
  std::string command;
  double l = 0.0;
  Window window;
  BqParams params;
  std::string slope = "0/1";
  std::string tau = "0";
  int max_word_len = 12;
  int image_size = 800;
  int samples = 500;
  int workers = 1;
  bool overlay_pp = false;
  std::string out;
  std::string csv;
  std::string report;
};

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfslice::cli
