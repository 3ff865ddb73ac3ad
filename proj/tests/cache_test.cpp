#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slideblock/cache.hpp"

using namespace slideblock;
namespace fs = std::filesystem;

namespace {

class CacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("slideblock-cache-test-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const IidModel kFair = IidModel::fair();

}  // namespace

TEST_F(CacheTest, RoundTripAndHit) {
  DistributionCache cache(dir_);
  std::vector<Pattern> chain = {Pattern("1"), Pattern("10")};
  int computed = 0;
  auto compute = [&] {
    ++computed;
    return exclusive_joint_distribution(validate_chain(chain, kFair), 9, kFair);
  };
  bool hit = true;
  auto first = cache.get_or_compute(chain, 9, kFair, Counting::kExclusive, compute, &hit);
  EXPECT_FALSE(hit);
  auto second = cache.get_or_compute(chain, 9, kFair, Counting::kExclusive, compute, &hit);
  EXPECT_TRUE(hit);
  EXPECT_EQ(computed, 1);
  EXPECT_EQ(first, second);
  EXPECT_FALSE(cache.load(chain, 9, kFair, Counting::kRaw).has_value());
  EXPECT_FALSE(cache.load(chain, 10, kFair, Counting::kExclusive).has_value());
}

TEST_F(CacheTest, IdsDependOnEveryParameter) {
  std::vector<Pattern> a = {Pattern("10")};
  auto id = DistributionCache::cache_id(a, 5, kFair, Counting::kRaw);
  EXPECT_EQ(id, DistributionCache::cache_id(a, 5, kFair, Counting::kRaw));
  EXPECT_NE(id, DistributionCache::cache_id(a, 6, kFair, Counting::kRaw));
  EXPECT_NE(id, DistributionCache::cache_id(a, 5, IidModel::bernoulli(Rational(1, 3)), Counting::kRaw));
  EXPECT_NE(id, DistributionCache::cache_id(a, 5, kFair, Counting::kExclusive));
  EXPECT_NE(id, DistributionCache::cache_id({Pattern("01")}, 5, kFair, Counting::kRaw));
}

TEST_F(CacheTest, CorruptedEntryIsIgnoredAndRecomputed) {
  DistributionCache cache(dir_);
  auto d = single_pattern_distribution(Pattern("10"), 12, kFair);
  std::string id = cache.store(d);
  fs::path file = dir_ / (id + ".dist");
  ASSERT_TRUE(fs::exists(file));

  std::string text;
  {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto pos = text.rfind("1/");
  ASSERT_NE(pos, std::string::npos);
  text[pos] = '3';
  { std::ofstream(file) << text; }

  EXPECT_FALSE(cache.load({Pattern("10")}, 12, kFair, Counting::kRaw).has_value());
  auto entries = cache.list();
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_FALSE(entries[0].valid);

  bool hit = true;
  auto again = cache.get_or_compute({Pattern("10")}, 12, kFair, Counting::kRaw,
                                    [&] { return single_pattern_distribution(Pattern("10"), 12, kFair); }, &hit);
  EXPECT_FALSE(hit);
  EXPECT_EQ(again, d);
  EXPECT_TRUE(cache.list()[0].valid);
}

TEST_F(CacheTest, ListAndClear) {
  DistributionCache cache(dir_);
  EXPECT_TRUE(cache.list().empty());
  cache.store(single_pattern_distribution(Pattern("10"), 5, kFair));
  cache.store(single_pattern_distribution(Pattern("110"), 5, kFair));
  auto entries = cache.list();
  ASSERT_EQ(entries.size(), 2u);
  for (const auto& e : entries) EXPECT_TRUE(e.valid) << e.summary;
  EXPECT_EQ(cache.clear(), 2u);
  EXPECT_TRUE(cache.list().empty());
}

TEST(CacheDir, Resolution) {
  ::unsetenv("SLIDEBLOCK_CACHE_DIR");
  EXPECT_EQ(DistributionCache::resolve_dir(std::nullopt), fs::path(".slideblock-cache"));
  ::setenv("SLIDEBLOCK_CACHE_DIR", "/tmp/from-env", 1);
  EXPECT_EQ(DistributionCache::resolve_dir(std::nullopt), fs::path("/tmp/from-env"));
  EXPECT_EQ(DistributionCache::resolve_dir(std::string("/tmp/flag")), fs::path("/tmp/flag"));
  ::unsetenv("SLIDEBLOCK_CACHE_DIR");
}
