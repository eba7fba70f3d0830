from collections import defaultdict


class ConfigError(Exception):
    """
    All configuration errors are subclasses of this exception.
    """
    pass


class InvalidDataException(ConfigError):
    """
    The validation errors of every key in a configuration.

    Only filled out for a key if the key has an error.

    .. autoattribute:: invalid_fields
        :annotation:

    .. automethod:: flatten
    """

    #: A dict with the validation exceptions for all keys that failed
    #: validation. Errors for :class:`~qlbdirac.config.fields.ListField`
    #: items are nested :exc:`InvalidDataException` instances keyed by index.
    invalid_fields = None

    def __init__(self, errors=None):
        super().__init__()
        self.invalid_fields = defaultdict(list)
        self.invalid_fields.update(errors or {})

    def __str__(self):
        return '; '.join('{0}: {1}'.format('.'.join(map(str, path)), message)
                         for path, message in self.flatten())

    def __repr__(self):
        return '<{} {{{}}}>'.format(self.__class__.__name__, ', '.join(
            '{0}: {1}'.format(k, v) for k, v in self.invalid_fields.items()))

    def __bool__(self):
        return bool(self.invalid_fields)

    def __eq__(self, other):
        if not isinstance(other, InvalidDataException):
            return NotImplemented
        return self.invalid_fields == other.invalid_fields

    def __hash__(self):
        return id(self)

    def add(self, name, error):
        self.invalid_fields[name].append(error)

    def flatten(self):
        """
        Yield a pair of ``(path, message)`` for each error, in key order.

        >>> list(errors.flatten())
        [
            (('steps',), 'This must be equal to or greater than the minimum of 0'),
            (('extent', 1), 'Not a valid integer'),
        ]
        """
        for name, error_list in self.invalid_fields.items():
            for error in error_list:
                if isinstance(error, InvalidDataException):
                    for nested_name, nested_error in error.flatten():
                        yield (name,) + nested_name, nested_error
                else:
                    yield (name,), error.msg


class ValidationException(ConfigError):
    """
    A single value failed validation.

    .. autoattribute:: msg
        :annotation:

    .. autoattribute:: code
        :annotation:
    """

    #: The validation error as a human readable string. Translatable via
    #: gettext, so do not use it to check the type of error.
    msg = None

    #: The validation error code as a string.
    code = None

    def __init__(self, message, code, **kwargs):
        self.msg = message
        self.code = code
        super().__init__(message, **kwargs)

    def __str__(self):
        return self.msg

    def __repr__(self):
        return '<{cls}: ({code}) {msg}>'.format(
            cls=type(self).__name__, code=self.code, msg=self.msg)

    def __eq__(self, other):
        if not isinstance(other, ValidationException):
            return NotImplemented
        return self.code == other.code

    def __hash__(self):
        return hash(self.code)


class ConfigFileError(ConfigError):
    """
    A configuration file could not be parsed.

    .. autoattribute:: line
        :annotation:
    """

    #: One-based line number of the offending line, if known.
    line = None

    def __init__(self, message, code='syntax', line=None, source=None):
        self.msg = message
        self.code = code
        self.line = line
        self.source = source
        super().__init__(message)

    def __str__(self):
        where = self.source or '<config>'
        if self.line is not None:
            where = '{0}:{1}'.format(where, self.line)
        return '{0}: {1}'.format(where, self.msg)


class NoData(ConfigError):
    """
    Signals that a key was not present in the configuration. This is
    different from an empty value. A field without a default raises this
    so the cleaned dict will **not** have the key.
    """
    def __str__(self):
        return self.__class__.__name__
