function book(isbn) {
  return $.ajax('https://api.bookshop.test:8443/api/books/' + isbn, {type: 'GET'});
}
