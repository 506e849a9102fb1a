"""Infrastructure shared by the pipeline modules."""
