"""confwarp: image augmentation through conformal square-to-disk mapping,
disk-preserving Mobius transformations, and rotations."""

from .confmap import (
    MapConstants,
    MapParams,
    default_constants,
    disk_to_square,
    forward_augment_point,
    mobius,
    mobius_inverse,
    pullback_augment_point,
    rotate,
    square_to_disk,
)
from .dataset import (
    DEFAULT_AUGMENT_PARAMS,
    Conformal,
    DatasetSpec,
    DiskScene,
    Rotation,
    build_dataset,
    downscale,
    render_scene,
    sample_scene,
)
from .elliptic import (
    JacobiTriple,
    complete_K,
    incomplete_F_complex,
    incomplete_F_real,
    jacobi_real,
    jacobi_sn_dn_complex,
)
from .errors import DomainError, GenerationError, PoleError
from .imageio import load_image, save_image
from .warp import (
    DISK_TO_SQUARE,
    SQUARE_TO_DISK,
    Augment,
    ImageGrid,
    bilinear_sample,
    warp_image,
    warp_image_multichannel,
    warp_with_map,
)

__version__ = "0.1.0"
