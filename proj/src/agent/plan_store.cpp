// SPDX-License-Identifier: Apache-2.0
#include "genop/agent/plan_store.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <mutex>

namespace genop::agent {

namespace fs = std::filesystem;

PlanStore::PlanStore(std::string directory) : directory_(std::move(directory)) {
  if (!directory_.empty()) rescan();
}

std::size_t PlanStore::rescan() {
  if (directory_.empty()) {
    std::shared_lock lock(mu_);
    return plans_.size();
  }
  std::map<Digest, std::shared_ptr<const planc::ModelPlan>> plans;
  std::map<std::string, Digest> names;
  std::error_code ec;
  if (!fs::is_directory(directory_, ec)) {
    throw Error(ErrorCode::kModelNotFound, "plan store '" + directory_ + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory_, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".gopl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      auto plan = std::make_shared<const planc::ModelPlan>(planc::load_plan_file(path.string()));
      names[path.stem().string()] = plan->plan_hash;
      plans[plan->plan_hash] = std::move(plan);
    } catch (const std::exception& e) {
      std::cerr << "plan store: skipping " << path.string() << ": " << e.what() << "\n";
    }
  }
  std::unique_lock lock(mu_);
  // In-memory additions survive a rescan.
  for (auto& [hash, plan] : added_) plans.try_emplace(hash, plan);
  for (auto& [name, hash] : added_names_) names.try_emplace(name, hash);
  plans_ = std::move(plans);
  names_ = std::move(names);
  return plans_.size();
}

std::shared_ptr<const planc::ModelPlan> PlanStore::find(const Digest& hash) const {
  std::shared_lock lock(mu_);
  auto it = plans_.find(hash);
  return it == plans_.end() ? nullptr : it->second;
}

std::shared_ptr<const planc::ModelPlan> PlanStore::find_or_rescan(const Digest& hash) {
  if (auto p = find(hash)) return p;
  rescan();
  return find(hash);
}

std::shared_ptr<const planc::ModelPlan> PlanStore::require(const Digest& hash) {
  auto p = find_or_rescan(hash);
  if (!p) throw Error(ErrorCode::kModelNotFound, "plan " + to_hex(hash) + " not in store");
  return p;
}

std::vector<Digest> PlanStore::list() const {
  std::shared_lock lock(mu_);
  std::vector<Digest> out;
  out.reserve(plans_.size());
  for (const auto& [hash, _] : plans_) out.push_back(hash);
  return out;
}

std::optional<Digest> PlanStore::hash_for_name(const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

void PlanStore::add(planc::ModelPlan plan, const std::string& name) {
  auto shared = std::make_shared<const planc::ModelPlan>(std::move(plan));
  std::unique_lock lock(mu_);
  if (!name.empty()) {
    names_[name] = shared->plan_hash;
    added_names_[name] = shared->plan_hash;
  }
  added_[shared->plan_hash] = shared;
  plans_[shared->plan_hash] = std::move(shared);
}

Digest resolve_model(PlanStore& store, const std::string& ref) {
  if (ref.size() == 64) {
    try {
      return digest_from_hex(ref);
    } catch (const Error&) {
    }
  }
  if (auto h = store.hash_for_name(ref)) return *h;
  store.rescan();
  if (auto h = store.hash_for_name(ref)) return *h;
  throw Error(ErrorCode::kModelNotFound, "no plan named '" + ref + "' in " + store.directory());
}

}  // namespace genop::agent
