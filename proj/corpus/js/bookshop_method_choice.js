function changeBook(isbn, remove, fields) {
  var verb = remove ? 'DELETE' : 'PUT';
  $.ajax({
    url: 'https://api.bookshop.test/api/books/' + isbn,
    type: verb,
    data: fields
  });
}
