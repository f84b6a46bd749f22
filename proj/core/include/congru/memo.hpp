#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace congru {

/// String-keyed cache of immutable values. Concurrent readers share the lock;
/// a miss computes outside the lock and the first insertion wins.
class Memo {
 public:
  template <class T>
  std::shared_ptr<const T> get_or_compute(const std::string& key, const std::function<T()>& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return std::static_pointer_cast<const T>(it->second);
    }
    auto value = std::make_shared<const T>(compute());
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, value);
    return std::static_pointer_cast<const T>(it->second);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const void>> entries_;
};

}  // namespace congru
