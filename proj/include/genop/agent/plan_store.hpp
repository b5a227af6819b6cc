// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "genop/planc/plan.hpp"

namespace genop::agent {

// Directory of `*.gopl` plan files keyed by their verified content hash.
// Concurrent lookups share a lock; rescans take it exclusively. The file
// stem doubles as a human-readable model name.
class PlanStore {
 public:
  // Scans immediately. An empty directory string gives an in-memory store.
  explicit PlanStore(std::string directory);

  // Reloads every plan file, dropping plans whose files are gone (plans
  // given to add() are kept); unreadable or corrupt files are skipped and
  // reported on stderr. Returns the number of plans held afterwards.
  std::size_t rescan();

  std::shared_ptr<const planc::ModelPlan> find(const Digest& hash) const;
  // find(), then one rescan() on a miss.
  std::shared_ptr<const planc::ModelPlan> find_or_rescan(const Digest& hash);
  // Like find_or_rescan() but throws MODEL_NOT_FOUND.
  std::shared_ptr<const planc::ModelPlan> require(const Digest& hash);

  // Sorted ascending (bytewise).
  std::vector<Digest> list() const;
  std::optional<Digest> hash_for_name(const std::string& name) const;

  void add(planc::ModelPlan plan, const std::string& name = {});

  const std::string& directory() const { return directory_; }

 private:
  std::string directory_;
  mutable std::shared_mutex mu_;
  std::map<Digest, std::shared_ptr<const planc::ModelPlan>> plans_;
  std::map<std::string, Digest> names_;
  std::map<Digest, std::shared_ptr<const planc::ModelPlan>> added_;
  std::map<std::string, Digest> added_names_;
};

// Resolves a model reference: a 64-digit hex hash, or a plan file stem.
// Throws MODEL_NOT_FOUND.
Digest resolve_model(PlanStore& store, const std::string& ref);

}  // namespace genop::agent
