"""Detector plumbing: preprocessing, backends, and the detect pipeline."""

from .detector import DetectorConfig, RawModelOutput, RawRow, detect
from .letterbox import LetterboxTransform, letterbox, unletterbox_box
from .mock import MockBackend
from .preprocess import DecodedImage, decode_image, image_tensor
from .remote import RemoteBackend, remote_infer

__all__ = [
    "DecodedImage",
    "DetectorConfig",
    "LetterboxTransform",
    "MockBackend",
    "RawModelOutput",
    "RawRow",
    "RemoteBackend",
    "decode_image",
    "detect",
    "image_tensor",
    "letterbox",
    "remote_infer",
    "unletterbox_box",
]
