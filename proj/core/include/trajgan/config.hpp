// Copyright 2026 The trajgan Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace trajgan {

// Flat "key = value" configuration: trivially diffable and greppable in
// experiment directories. '#' starts a comment.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig from_file(const std::filesystem::path& path);
  static KeyValueConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  // Applies "key=value" override strings (command line wins over file).
  void apply_overrides(const std::vector<std::string>& overrides);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Rejects any key outside `known`, naming the offender.
  void require_known_keys(const std::vector<std::string>& known) const;

  // Sorted "key = value" lines; the run hash is FNV-1a over this text.
  std::string canonical_text() const;
  std::string hash() const;

  void write(const std::filesystem::path& path) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace trajgan
