#include <algorithm>
#include <cctype>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "boxforge/coco_io.hpp"
#include "boxforge/error.hpp"

namespace boxforge::coco {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

ImageBuffer from_mat(const cv::Mat& bgr) {
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  ImageBuffer img;
  img.width = rgb.cols;
  img.height = rgb.rows;
  img.pixels.assign(rgb.data, rgb.data + static_cast<std::size_t>(rgb.total()) * 3);
  return img;
}

cv::Mat to_mat(const ImageBuffer& img) {
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3) {
    throw DataError("image buffer: pixel count does not match dimensions");
  }
  cv::Mat rgb(img.height, img.width, CV_8UC3,
              const_cast<std::uint8_t*>(img.pixels.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("cannot open image " + path.string());
  }
  // IMREAD_COLOR yields 3-channel BGR for color, gray, and paletted input.
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw IoError("cannot decode image " + path.string());
  }
  return from_mat(bgr);
}

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  std::vector<int> params;
  if (ext == ".jpg" || ext == ".jpeg") {
    params = {cv::IMWRITE_JPEG_QUALITY, 95};
  } else if (ext != ".png") {
    throw IoError("unsupported image extension '" + ext + "' for " +
                  path.string());
  }
  if (!cv::imwrite(path.string(), to_mat(img), params)) {
    throw IoError("cannot encode image " + path.string());
  }
}

ImageBuffer resize_image(const ImageBuffer& img, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw ConfigError("resize_image: dimensions must be positive");
  }
  if (width == img.width && height == img.height) return img;
  cv::Mat dst;
  cv::resize(to_mat(img), dst, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return from_mat(dst);
}

}  // namespace boxforge::coco
