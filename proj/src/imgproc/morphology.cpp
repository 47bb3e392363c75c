#include "chartex/imgproc.hpp"

namespace chartex::imgproc {

namespace {

// Square structuring element spans offsets [-lo, hi] with lo + hi + 1 == kernel.
// Both passes are separable: a row pass then a column pass.
BinaryImage rank_filter(const BinaryImage& img, int kernel, bool erode_mode) {
  if (kernel < 1) throw InvalidArgument("morphology kernel must be >= 1");
  if (kernel == 1) return img;
  const int w = static_cast<int>(img.cols()), h = static_cast<int>(img.rows());
  const int lo = (kernel - 1) / 2, hi = kernel / 2;

  // Outside the image is background: erosion sees a miss, dilation sees nothing.
  auto pass = [&](const BinaryImage& src, bool horizontal) {
    BinaryImage dst(h, w);
    const int n = horizontal ? w : h;
    const int lines = horizontal ? h : w;
    std::vector<int> prefix(n + 1);
    for (int l = 0; l < lines; ++l) {
      prefix[0] = 0;
      for (int i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + (horizontal ? src(l, i) : src(i, l));
      for (int i = 0; i < n; ++i) {
        // dilation reflects the element: a pixel is set if any p with i in [p-lo, p+hi] is set
        const int a = erode_mode ? i - lo : i - hi;
        const int b = erode_mode ? i + hi : i + lo;
        const int ca = std::max(a, 0), cb = std::min(b, n - 1);
        const int count = prefix[cb + 1] - prefix[ca];
        bool v;
        if (erode_mode)
          v = (a >= 0 && b < n) && count == kernel;
        else
          v = count > 0;
        if (horizontal)
          dst(l, i) = v;
        else
          dst(i, l) = v;
      }
    }
    return dst;
  };
  return pass(pass(img, true), false);
}

}  // namespace

BinaryImage erode(const BinaryImage& img, int kernel) { return rank_filter(img, kernel, true); }

BinaryImage dilate(const BinaryImage& img, int kernel) { return rank_filter(img, kernel, false); }

BinaryImage morphological_open(const BinaryImage& img, int kernel) {
  return dilate(erode(img, kernel), kernel);
}

BinaryImage majority_filter(const BinaryImage& img) {
  const Eigen::Index h = img.rows(), w = img.cols();
  BinaryImage out = BinaryImage::Constant(h, w, false);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) {
      int n = 0;
      for (Eigen::Index yy = std::max<Eigen::Index>(y - 1, 0); yy <= std::min(y + 1, h - 1); ++yy)
        for (Eigen::Index xx = std::max<Eigen::Index>(x - 1, 0); xx <= std::min(x + 1, w - 1); ++xx) n += img(yy, xx);
      out(y, x) = n >= 5;
    }
  return out;
}

BinaryImage morphological_close(const BinaryImage& img, int kernel) {
  return erode(dilate(img, kernel), kernel);
}

}  // namespace chartex::imgproc
