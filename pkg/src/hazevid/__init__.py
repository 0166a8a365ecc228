"""Video enhancement for hazy, low-light and high-dynamic-range footage.

Low-light and high-dynamic-range frames are inverted, de-hazed with a
dark-channel core and inverted back.  Transmission maps are reused across
frames wherever block motion search finds a close match.
"""
from ._kernels import available as available_backends, backend_name, set_backend
from .dehaze import (Airlight, DehazeConfig, TransmissionMap, blend_airlight, boost_multiplier,
                     estimate_airlight, recover_frame, transmission_map)
from .detect import (DetectConfig, ImpairmentClass, classify_frame, hazy_fraction, pixel_is_hazy,
                     scene_changed)
from .frame import Frame, GrayMap, HsvPixel, invert_frame, min_channel_map, rgb_to_hsv
from .motion import (AccelConfig, MotionField, MotionVector, motion_search, propagate_tmap,
                     sad_pattern, subsampled_sad)
from .pipeline import (GopPlan, Mode, PipelineConfig, RunReport, enhance_gop, enhance_sequence,
                       plan_gops)

__version__ = "0.1.0"
