import hashlib
import os


# the global path to the folder holding the bundled model files
MODEL_DIR = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), 'models')


def get_data_path(file_path):
    """Get a path to the file provided as an argument if it were inside the
    folder of bundled models, parameter sets and designs

    Arguments:

    file_path: str
        a string that specifies the location relative to the model folder

    Returns:

    data_path: str
        a string that specifies the absolute location on disk of the file

    """

    return os.path.join(MODEL_DIR, file_path)


def file_digest(path):
    """The sha256 hex digest of a file, read in chunks"""

    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(32768), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ModelResource(object):
    """A handle on an input file of the toolkit, either one of the bundled
    models, parameter sets and designs or a file given by the user

    Public Attributes:

    path: str
        the absolute location of the file on disk
    is_available: bool
        a boolean indicator that specifies whether the file is present
    digest: str
        the sha256 digest of the file contents, recorded in run manifests

    Public Methods:

    read_text() -> str:
        the UTF-8 contents of the file

    """

    def __init__(self, file_path, is_absolute=True):
        """Locate an input file

        Arguments:

        file_path: str
            a string that specifies the location of the file
        is_absolute: bool
            a boolean that indicates whether the provided path is an
            absolute path or relative to the bundled model folder

        """

        self.path = os.path.abspath(file_path) \
            if is_absolute else get_data_path(file_path)

    @classmethod
    def locate(cls, file_path):
        """Resolve a path on disk, falling back to the bundled folder for
        bare names such as 'gene_expression.net'

        """

        if os.path.exists(file_path) or os.path.dirname(file_path):
            return cls(file_path, is_absolute=True)
        return cls(file_path, is_absolute=False)

    @property
    def is_available(self):
        return os.path.isfile(self.path)

    @property
    def digest(self):
        return file_digest(self.path)

    def read_text(self):
        with open(self.path, "r", encoding="utf-8") as f:
            return f.read()

    def __repr__(self):
        return f"ModelResource({self.path!r})"
