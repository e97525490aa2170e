#pragma once

#include <sfcmap/curve.hpp>
#include <sfcmap/error.hpp>
#include <sfcmap/grid.hpp>
#include <sfcmap/locality.hpp>
#include <sfcmap/mapping.hpp>
#include <sfcmap/random.hpp>
#include <sfcmap/voxel/atoms.hpp>
#include <sfcmap/voxel/binvox.hpp>
#include <sfcmap/voxel/pca.hpp>
#include <sfcmap/voxel/raster.hpp>
