#include "omw/exactq.hpp"

#include <cctype>

#include "omw/errors.hpp"

namespace omw {

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw usage_error("empty rational literal");
  // mpq_class accepts a leading '+', whitespace and other liberties we do not
  // want in data files; insist on an optional '-', digits, optional "/digits".
  std::size_t i = 0;
  if (text[i] == '-') ++i;
  if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
    throw usage_error("malformed rational literal: " + text);
  bool seen_slash = false;
  for (; i < text.size(); ++i) {
    if (text[i] == '/') {
      if (seen_slash || i + 1 >= text.size())
        throw usage_error("malformed rational literal: " + text);
      seen_slash = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw usage_error("malformed rational literal: " + text);
  }
  mpq_class value;
  if (value.set_str(text, 10) != 0)
    throw usage_error("malformed rational literal: " + text);
  if (value.get_den() == 0)
    throw usage_error("zero denominator in rational literal: " + text);
  value.canonicalize();
  return value;
}

std::string format_rational(const mpq_class& value) {
  mpq_class v = value;
  v.canonicalize();
  return v.get_str();
}

mpq_class dot(const std::vector<mpq_class>& a,
              const std::vector<mpq_class>& b) {
  if (a.size() != b.size())
    throw usage_error("dot: dimension mismatch");
  mpq_class acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace omw
