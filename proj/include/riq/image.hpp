#ifndef RIQ_IMAGE_HPP
#define RIQ_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace riq {

// Decoded RGB image, row-major, 3 interleaved channels, values in [0,1].
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // width * height * 3

    double& at(int row, int col, int ch) { return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }
    double at(int row, int col, int ch) const { return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }

    static RasterImage constant(int width, int height, double r, double g, double b);
};

// Per-pixel (h, s, v) with h in degrees [0, 360), s and v in [0, 1].
struct HsvImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // width * height * 3, (h, s, v) interleaved

    double& at(int row, int col, int ch) { return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }
    double at(int row, int col, int ch) const { return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }
};

struct PreprocessParams {
    int target_size = 256;       // square output side
    double gaussian_sigma = 1.0;
    int gaussian_kernel = 5;     // odd
    bool equalize = true;

    void validate() const;
};

// Decodes PNG, JPEG, or binary PPM (P6, maxval 255) based on file magic.
RasterImage load_image(const std::string& path);

// Writers used by the synthetic generator and debug output.
void save_ppm(const RasterImage& img, const std::string& path);
void save_pgm(const std::vector<std::uint8_t>& gray, int width, int height, const std::string& path);

HsvImage rgb_to_hsv(const RasterImage& img);
RasterImage hsv_to_rgb(const HsvImage& img);

RasterImage resize_bilinear(const RasterImage& img, int out_width, int out_height);
RasterImage gaussian_blur(const RasterImage& img, int kernel_side, double sigma);

// Resize to target square, equalize the V histogram (256-bin CDF), then blur.
RasterImage preprocess(const RasterImage& img, const PreprocessParams& p = {});

}  // namespace riq

#endif
