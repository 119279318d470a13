#ifndef DEEPR_ENV_HPP
#define DEEPR_ENV_HPP

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "deepr/value.hpp"

namespace deepr {

// Lazily evaluated argument: an expression, the environment to evaluate it
// in (dropped after forcing), and a once-only cached value.
struct Promise {
  RPtr expr;
  EnvPtr env;
  RPtr value;
  bool forcing = false;
  bool missing_origin = false;  // created for an unsupplied argument

  static PromisePtr make(RPtr expr, EnvPtr env) {
    auto p = std::make_shared<Promise>();
    p->expr = std::move(expr);
    p->env = std::move(env);
    return p;
  }
  static PromisePtr forced(RPtr value) {
    auto p = std::make_shared<Promise>();
    p->value = std::move(value);
    return p;
  }
};

struct Binding {
  RPtr value;
  PromisePtr promise;  // exactly one of value/promise is set
};

// A frame of name -> binding pairs plus a reference to the enclosing
// environment. The empty environment is the unique one with no enclosure.
class Environment : public std::enable_shared_from_this<Environment> {
 public:
  explicit Environment(EnvPtr enclosure) : enclosure_(std::move(enclosure)) {}

  Binding* find_local(const std::string& name);
  const Binding* find_local(const std::string& name) const;

  // Walks the frame then the enclosures; returns nullptr when absent.
  Binding* find(const std::string& name);

  void set(const std::string& name, RPtr value);
  void set_promise(const std::string& name, PromisePtr p);
  bool remove(const std::string& name);

  bool has_local(const std::string& name) const {
    return frame_.count(name) != 0;
  }

  // Names in insertion order.
  std::vector<std::string> names_in_order() const;
  size_t size() const { return frame_.size(); }

  EnvPtr enclosure() const { return enclosure_; }
  void set_enclosure(EnvPtr e) { enclosure_ = std::move(e); }

  bool locked() const { return locked_; }
  void lock() { locked_ = true; }

  // Stable print ordinal, assigned on first display.
  mutable int print_id = -1;

 private:
  std::unordered_map<std::string, Binding> frame_;
  std::vector<std::string> order_;
  EnvPtr enclosure_;
  bool locked_ = false;
};

}  // namespace deepr

#endif  // DEEPR_ENV_HPP
