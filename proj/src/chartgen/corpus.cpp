#include "chartex/chartgen.hpp"

#include <array>
#include <cmath>

namespace chartex::chartgen {

namespace {

const std::array<Rgb, 7> kPalette = {{{31, 119, 180},
                                      {230, 110, 0},
                                      {44, 160, 44},
                                      {214, 39, 40},
                                      {148, 103, 189},
                                      {140, 86, 75},
                                      {0, 128, 128}}};

const std::array<const char*, 12> kTitles = {
    "Mean change from baseline", "Response rate by arm", "Annual revenue",  "Visual acuity at week 52",
    "Sample counts per site",    "Growth by region",     "Test scores",     "Adverse events",
    "Median survival",           "Yield per plot",       "Survey results", "Energy use by sector"};
const std::array<const char*, 8> kXLabels = {"Quarter", "Region", "Group",         "Year",
                                             "Month",   "Site",   "Treatment arm", "Cohort"};
const std::array<const char*, 8> kYLabels = {"Score",  "Percent (%)", "Letters", "Count",
                                             "Mass (kg)", "Rate",     "Units",   "Change (%)"};

std::vector<std::string> category_names(std::mt19937_64& rng, int n) {
  static const std::array<const char*, 12> months = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                     "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  std::vector<std::string> out;
  switch (rng() % 5) {
    case 0:
      for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
      break;
    case 1:
      for (int i = 0; i < n; ++i) out.push_back("Q" + std::to_string(i + 1));
      break;
    case 2:
      for (int i = 0; i < n; ++i) out.push_back(std::to_string(2010 + i));
      break;
    case 3:
      for (int i = 0; i < n; ++i) out.push_back(months[static_cast<std::size_t>(i) % months.size()]);
      break;
    default:
      for (int i = 0; i < n; ++i) out.push_back("G" + std::to_string(i + 1));
      break;
  }
  return out;
}

bool coin(std::mt19937_64& rng, double p) { return static_cast<double>(rng() % 1000000) < p * 1000000.0; }

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined input.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ChartSpec sample_spec(std::mt19937_64& rng, const CorpusRanges& r) {
  if (r.min_series < 1 || r.max_series < r.min_series || r.min_bars < 1 || r.max_bars < r.min_bars ||
      r.y_max_choices.empty() || r.noise_choices.empty())
    throw InvalidArgument("empty corpus ranges");
  ChartSpec s;
  s.width = r.width;
  s.height = r.height;
  const int ns = r.min_series + static_cast<int>(rng() % static_cast<std::uint64_t>(r.max_series - r.min_series + 1));
  const int cmin = std::max(1, (r.min_bars + ns - 1) / ns), cmax = std::max(cmin, r.max_bars / ns);
  const int ncat = cmin + static_cast<int>(rng() % static_cast<std::uint64_t>(cmax - cmin + 1));

  s.y_max = r.y_max_choices[rng() % r.y_max_choices.size()];
  s.tick_step = s.y_max / 5.0;
  // Values in [0.1, 1] * y_max at label precision: tenths up to 50, integers above.
  const double per_unit = s.y_max <= 50.0 ? 10.0 : 1.0;
  const auto lo = static_cast<std::int64_t>(std::llround(0.1 * s.y_max * per_unit));
  const auto hi = static_cast<std::int64_t>(std::llround(s.y_max * per_unit));
  s.values.assign(static_cast<std::size_t>(ncat), std::vector<double>(static_cast<std::size_t>(ns)));
  for (auto& row : s.values)
    for (double& v : row)
      v = static_cast<double>(lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1))) / per_unit;

  const std::size_t offset = rng() % kPalette.size();
  for (int j = 0; j < ns; ++j) s.colors.push_back(kPalette[(offset + static_cast<std::size_t>(j)) % kPalette.size()]);

  s.title = kTitles[rng() % kTitles.size()];
  s.x_label = kXLabels[rng() % kXLabels.size()];
  s.y_label = kYLabels[rng() % kYLabels.size()];
  s.categories = category_names(rng, ncat);
  s.value_labels = coin(rng, r.flag_probability);
  s.gridlines = coin(rng, r.flag_probability);
  s.hatching = coin(rng, r.flag_probability);
  s.noise = r.noise_choices[rng() % r.noise_choices.size()];
  s.seed = rng();
  return s;
}

Rendered generate_item(std::uint64_t seed, int index, const CorpusRanges& ranges) {
  constexpr int kMaxAttempts = 1000;
  const std::uint64_t item_seed = mix_seed(seed, static_cast<std::uint64_t>(index));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(mix_seed(item_seed, static_cast<std::uint64_t>(attempt)));
    try {
      return render(sample_spec(rng, ranges));
    } catch (const SpecInfeasible&) {
    }
  }
  throw SpecInfeasible("no renderable spec after " + std::to_string(kMaxAttempts) + " attempts");
}

std::vector<Rendered> generate_corpus(int n, std::uint64_t seed, const CorpusRanges& ranges) {
  std::vector<Rendered> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out.push_back(generate_item(seed, i, ranges));
  return out;
}

}  // namespace chartex::chartgen
