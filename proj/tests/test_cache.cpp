#include "cycleforge/verify.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <unistd.h>

using namespace cycleforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path = fs::temp_directory_path() /
               ("cycleforge-" + std::string(info->name()) + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cache, RoundTrip) {
    TempDir d;
    ResultCache c(d.path / "store");
    ASSERT_TRUE(c.enabled());
    EXPECT_FALSE(c.get("m", "p").has_value());
    EXPECT_TRUE(c.put("m", "p", "payload\nwith lines\n"));
    EXPECT_EQ(c.get("m", "p"), std::optional<std::string>("payload\nwith lines\n"));
    EXPECT_FALSE(c.get("m", "q").has_value());
    EXPECT_FALSE(c.get("other", "p").has_value());
    EXPECT_EQ(c.stats().hits, 1u);
    EXPECT_EQ(c.stats().writes, 1u);
}

TEST(Cache, VersionBumpInvalidates) {
    TempDir d;
    ResultCache a(d.path, "1.0.0");
    a.put("m", "p", "x");
    ResultCache b(d.path, "1.0.1");
    EXPECT_FALSE(b.get("m", "p").has_value());
    EXPECT_NE(a.key("m", "p"), b.key("m", "p"));
    EXPECT_TRUE(ResultCache(d.path, "1.0.0").get("m", "p").has_value());
}

TEST(Cache, CorruptionIsDetectedAndRecomputed) {
    TempDir d;
    ResultCache c(d.path);
    c.put("m", "p", "good result");
    {
        std::fstream f(c.path_of("m", "p"), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-1, std::ios::end);
        f.put('X');
    }
    EXPECT_FALSE(c.get("m", "p").has_value());
    EXPECT_EQ(c.stats().corrupted, 1u);
    EXPECT_FALSE(fs::exists(c.path_of("m", "p")));
    c.put("m", "p", "good result");
    EXPECT_EQ(c.get("m", "p"), std::optional<std::string>("good result"));
}

TEST(Cache, UnwritableDirectoryWarnsAndDisables) {
    TempDir d;
    // A path below a regular file cannot be created, even with elevated privileges.
    std::ofstream(d.path / "file") << "x";
    std::ostringstream warn;
    ResultCache c(d.path / "file" / "cache", code_version, &warn);
    EXPECT_FALSE(c.enabled());
    EXPECT_NE(warn.str().find("not writable"), std::string::npos);
    EXPECT_FALSE(c.put("m", "p", "x"));
    EXPECT_FALSE(c.get("m", "p").has_value());
}

TEST(Cache, DirectoryPrecedence) {
    const char* old = std::getenv("CYCLEFORGE_CACHE");
    std::string saved = old ? old : "";
    ::setenv("CYCLEFORGE_CACHE", "/tmp/from-env", 1);
    EXPECT_EQ(ResultCache::resolve_dir("/tmp/from-flag"), fs::path("/tmp/from-flag"));
    EXPECT_EQ(ResultCache::resolve_dir(""), fs::path("/tmp/from-env"));
    ::unsetenv("CYCLEFORGE_CACHE");
    EXPECT_EQ(ResultCache::resolve_dir(""), fs::path(".cycleforge-cache"));
    if (old) ::setenv("CYCLEFORGE_CACHE", saved.c_str(), 1);
}

TEST(Cache, WarmClaimMatchesCold) {
    TempDir d;
    ResultCache c(d.path);
    VerifyOptions o;
    o.fast = true;
    auto cold = run_claim(4, o, &c);
    auto warm = run_claim(4, o, &c);
    EXPECT_EQ(cold.status, "pass");
    EXPECT_FALSE(cold.cached);
    EXPECT_TRUE(warm.cached);
    auto strip = [](json j) {
        j.erase("timing");
        return j.dump();
    };
    EXPECT_EQ(strip(verification_report({cold}, o)), strip(verification_report({warm}, o)));
    // a different seed is a different key
    o.seed += 1;
    EXPECT_FALSE(run_claim(4, o, &c).cached);
}
