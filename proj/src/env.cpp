#include "deepr/env.hpp"

#include <algorithm>

namespace deepr {

Binding* Environment::find_local(const std::string& name) {
  auto it = frame_.find(name);
  return it == frame_.end() ? nullptr : &it->second;
}

const Binding* Environment::find_local(const std::string& name) const {
  auto it = frame_.find(name);
  return it == frame_.end() ? nullptr : &it->second;
}

Binding* Environment::find(const std::string& name) {
  for (Environment* e = this; e != nullptr; e = e->enclosure_.get()) {
    auto it = e->frame_.find(name);
    if (it != e->frame_.end()) return &it->second;
  }
  return nullptr;
}

void Environment::set(const std::string& name, RPtr value) {
  auto it = frame_.find(name);
  if (it == frame_.end()) {
    frame_.emplace(name, Binding{std::move(value), nullptr});
    order_.push_back(name);
  } else {
    it->second.value = std::move(value);
    it->second.promise = nullptr;
  }
}

void Environment::set_promise(const std::string& name, PromisePtr p) {
  auto it = frame_.find(name);
  if (it == frame_.end()) {
    frame_.emplace(name, Binding{nullptr, std::move(p)});
    order_.push_back(name);
  } else {
    it->second.value = nullptr;
    it->second.promise = std::move(p);
  }
}

bool Environment::remove(const std::string& name) {
  auto it = frame_.find(name);
  if (it == frame_.end()) return false;
  frame_.erase(it);
  order_.erase(std::remove(order_.begin(), order_.end(), name), order_.end());
  return true;
}

std::vector<std::string> Environment::names_in_order() const {
  return order_;
}

}  // namespace deepr
