"""framewright: a workbench for reviewing machine pre-annotated
FrameNet-style frame-semantic annotation."""

__version__ = "0.1.0"
