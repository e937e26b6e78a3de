function order(customer, isbn) {
  var payload = {
    customer: customer,
    items: [{isbn: isbn}]
  };
  $.post('https://api.bookshop.test/api/orders', payload);
}
