#pragma once

#include <stdexcept>
#include <string>

namespace omw {

// Exit code conventions shared by the command line tool and the drivers:
//   0 success, 1 verification failure, 2 usage error, 3 degeneracy budget
//   exhausted.  Library code throws; the tool maps exception type to code.

// A mathematical check failed: an axiom, a prescribed cocircuit pattern, a
// structural invariant of a file, or a mismatch between two computations that
// must agree.
class verification_error : public std::runtime_error {
public:
  explicit verification_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed input: unknown element token, bad JSON shape, out-of-range
// argument, incompatible ground sets.
class usage_error : public std::runtime_error {
public:
  explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// A genericity or scale-separation assumption of the randomized construction
// failed for the sampled data.  Callers retry with a fresh sub-seed or a
// smaller perturbation scale; the retry budget lives with the caller.
class degeneracy_error : public std::runtime_error {
public:
  // Which knob the retry loop should turn.
  enum class remedy { resample_eps, shrink_delta };

  degeneracy_error(remedy r, const std::string& what)
      : std::runtime_error(what), suggested(r) {}

  remedy suggested;
};

}  // namespace omw
