import copy
import difflib
import enum
import functools
from gettext import gettext as _

from .exceptions import ConfigError, InvalidDataException, NoData, ValidationException
from .fields import ErrorMessageMixin, Field


def partition_dict(d, pred, dict_class=dict):
    """
    Split a dict in two based on ``pred(key, value)``. Returns
    ``(false, true)``: the pairs for which ``pred`` returned ``False``
    and those for which it returned ``True``.
    """
    def iterator(acc, pair):
        f, t = acc
        key, val = pair
        if pred(key, val):
            t[key] = val
        else:
            f[key] = val
        return f, t
    return functools.reduce(iterator, d.items(), (dict_class(), dict_class()))


def format_text(value):
    """
    Write a cleaned value back as configuration text that cleans to the
    same value. ``None`` becomes the empty string.
    """
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, enum.Enum):
        return format_text(value.value)
    if isinstance(value, (list, tuple)):
        return ', '.join(format_text(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ''
    return str(value)


class DeclarativeFieldsMetaclass(type):
    def __new__(mcs, name, bases, attrs):
        attrs, new_fields = partition_dict(
            attrs, lambda k, v: isinstance(v, Field))

        cls = super().__new__(mcs, name, bases, attrs)

        # Fields of base classes first, in declaration order
        fields = {}
        field_sets = [getattr(base, 'fields', {}) for base in reversed(cls.__mro__)]
        field_sets.append(new_fields)
        for field_set in field_sets:
            if field_set is None:
                continue
            for field_name, field in field_set.items():
                fields[field_name] = copy.deepcopy(field)
        cls.fields = fields

        return cls


class BaseValidator(ErrorMessageMixin):
    """
    Clean a dict of raw text values against a set of fields and return
    the typed values.

    Every problem is collected before anything is raised, so one
    :exc:`~qlbdirac.config.exceptions.InvalidDataException` lists all of
    them. Rules that involve several keys go in :meth:`validate`.
    """

    #: A ``dict`` of ``"name": Field()`` entries.
    fields = None

    #: Whether keys without a field are allowed.
    allow_unknown_fields = False

    default_error_messages = {
        'unknown': _("Unknown key"),
        'unknown_similar': _("Unknown key, did you mean {key!r}?"),
    }

    def __init__(self, fields=None, allow_unknown_fields=None,
                 error_messages=None, **kwargs):
        super().__init__(error_messages=error_messages, **kwargs)

        self.fields = copy.deepcopy(self.fields or {})
        if fields is not None:
            self.fields.update(fields)

        if allow_unknown_fields is not None:
            self.allow_unknown_fields = allow_unknown_fields

    def clean(self, data):
        """
        Validate ``data`` and return the cleaned dict, or raise
        :exc:`~qlbdirac.config.exceptions.InvalidDataException`.
        """
        cleaned_data, errors = self.clean_fields(data)

        if not errors:
            self.validate(cleaned_data, errors)

        if errors:
            raise errors
        return cleaned_data

    def clean_fields(self, data):
        errors = InvalidDataException()
        cleaned_data = {}
        if not self.allow_unknown_fields:
            for name in data:
                if name not in self.fields:
                    errors.add(name, self.unknown_key(name))

        for name, field in self.fields.items():
            try:
                cleaned_data[name] = field.clean(data.get(name, NoData))
            except NoData:
                pass
            except ConfigError as err:
                errors.add(name, err)

        return cleaned_data, errors

    def unknown_key(self, name):
        matches = difflib.get_close_matches(name, self.fields, n=1)
        if not matches:
            return self.error('unknown')
        return ValidationException(
            self.error_messages['unknown_similar'].format(key=matches[0]), code='unknown')

    def render_items(self, values):
        """
        ``(key, text)`` pairs for the fields present in ``values``, in
        declaration order. Feeding the pairs back through :meth:`clean`
        gives the same values.
        """
        return [(name, format_text(values[name])) for name in self.fields if name in values]

    def validate(self, cleaned_data, errors):
        """
        Cross-key checks. Runs only when every key cleaned on its own.
        May fill in derived values in ``cleaned_data`` and add errors
        to ``errors``.
        """
        pass

    def __getitem__(self, key):
        return self.fields[key]

    def __deepcopy__(self, memo):
        obj = super().__deepcopy__(memo)
        obj.fields = copy.deepcopy(self.fields, memo)
        return obj


class Validator(BaseValidator, metaclass=DeclarativeFieldsMetaclass):
    pass
