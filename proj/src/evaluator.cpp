#include "hypermads/evaluator.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "hypermads/numformat.hpp"

namespace hypermads {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EvalResult PointEvaluator::evaluate(const FlatPoint& x) {
  Point p;
  try {
    p = decode(x);
  } catch (const std::exception&) {
    return {EvalStatus::EvalFailed, kInf};
  }
  if (!architecture_feasible(p, spec_).feasible)
    return {EvalStatus::Infeasible, kInf};
  return evaluate_point(p);
}

// ---------------------------------------------------------------------------

double analytic_choice_offset(int optimizer_choice) {
  switch (optimizer_choice) {
    case 1: return 0.8;
    case 2: return 0.4;
    case 3: return 0.05;
    case 4: return 0.9;
  }
  return 1.0;
}

EvalResult AnalyticEvaluator::evaluate_point(const Point& p) {
  const auto flat = encode(p);
  const auto coords = layout(p, spec());
  double value = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].header || coords[i].fixed) continue;
    const double mid = 0.5 * (coords[i].lower + coords[i].upper);
    const double d = flat[i] - mid;
    value += d * d;
  }
  if (kind_ == AnalyticKind::Quadratic)
    value += analytic_choice_offset(p.optimizer_choice);
  return {EvalStatus::Ok, value};
}

// ---------------------------------------------------------------------------

ToyTrainerEvaluator::ToyTrainerEvaluator(SpaceSpec spec, ToyDataset data,
                                         std::uint64_t seed,
                                         std::string csv_dir)
    : PointEvaluator(std::move(spec)),
      data_(std::move(data)),
      seed_(seed),
      csv_dir_(std::move(csv_dir)) {}

EvalResult ToyTrainerEvaluator::evaluate_point(const Point& p) {
  ++counter_;
  TrainSettings settings;
  settings.seed = seed_;
  TrainResult r;
  try {
    r = train_network(p, data_, settings);
  } catch (const std::exception&) {
    return {EvalStatus::EvalFailed, kInf};
  }
  if (r.failed) return {EvalStatus::EvalFailed, kInf};

  if (!csv_dir_.empty()) {
    std::filesystem::create_directories(csv_dir_);
    std::ofstream out(std::filesystem::path(csv_dir_) /
                      ("epochs_" + std::to_string(counter_) + ".csv"));
    out << "epoch,train_accuracy,validation_accuracy,learning_rate\n";
    for (const auto& st : r.log)
      out << st.epoch << ',' << format_number(st.train_accuracy) << ','
          << format_number(st.val_accuracy) << ','
          << format_number(st.learning_rate) << '\n';
  }
  return {EvalStatus::Ok, 100.0 - r.test_accuracy};
}

// ---------------------------------------------------------------------------

SubprocessResult run_subprocess(const std::string& command,
                                const std::string& arg,
                                double timeout_seconds) {
  SubprocessResult result;
  int fds[2];
  if (pipe(fds) != 0) return result;

  const std::string full = command + " '" + arg + "'";
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return result;
  }
  if (pid == 0) {
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", full.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  fcntl(fds[0], F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_seconds);
  bool exited = false;
  int status = 0;
  char buf[4096];
  while (true) {
    // drain whatever is available so the child never blocks on the pipe
    while (true) {
      const ssize_t n = read(fds[0], buf, sizeof(buf));
      if (n > 0)
        result.stdout_text.append(buf, static_cast<std::size_t>(n));
      else
        break;
    }
    if (!exited) {
      const pid_t w = waitpid(pid, &status, WNOHANG);
      if (w == pid) {
        exited = true;
        continue;  // drain once more, then the read below returns 0
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        result.timed_out = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    } else {
      // child gone; a blocking-free read returning 0 means EOF
      const ssize_t n = read(fds[0], buf, sizeof(buf));
      if (n > 0) {
        result.stdout_text.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      break;
    }
  }
  close(fds[0]);
  if (!result.timed_out && WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (!result.timed_out)
    result.exit_code = -1;
  return result;
}

EvalResult ExternalEvaluator::evaluate_point(const Point& p) {
  namespace fs = std::filesystem;
  std::string path =
      (fs::temp_directory_path() / "hypermads_bb_XXXXXX").string();
  const int fd = mkstemp(path.data());
  if (fd < 0) return {EvalStatus::EvalFailed, kInf};
  {
    const std::string line = format_flat(encode(p)) + "\n";
    const ssize_t n = write(fd, line.data(), line.size());
    close(fd);
    if (n != static_cast<ssize_t>(line.size())) {
      unlink(path.c_str());
      return {EvalStatus::EvalFailed, kInf};
    }
  }

  const auto sub =
      run_subprocess(options_.command, path, options_.timeout_seconds);
  unlink(path.c_str());

  if (sub.timed_out || sub.exit_code != 0)
    return {EvalStatus::EvalFailed, kInf};
  std::istringstream in(sub.stdout_text);
  std::string token;
  if (!(in >> token)) return {EvalStatus::EvalFailed, kInf};
  const auto value = parse_number(token);
  if (!value || !std::isfinite(*value))
    return {EvalStatus::EvalFailed, kInf};
  return {EvalStatus::Ok, *value};
}

// ---------------------------------------------------------------------------

EvalResult CallbackEvaluator::evaluate(const FlatPoint& x) {
  double v = 0;
  try {
    v = fn_(x);
  } catch (const std::exception&) {
    return {EvalStatus::EvalFailed, kInf};
  }
  if (!std::isfinite(v)) return {EvalStatus::EvalFailed, kInf};
  return {EvalStatus::Ok, v};
}

}  // namespace hypermads
